#include "odikit/degradation.hpp"

#include <cmath>
#include <vector>

#include "odikit/parallel.hpp"
#include "odikit/resize.hpp"

namespace odikit {

using geom::ProjectionSpec;

void DegradationConfig::validate(int erp_height) const {
    if (scale < 1) throw ConfigError("scale must be >= 1");
    if (!(pad_aperture > geom::kPi && pad_aperture < 2.0 * geom::kPi))
        throw ConfigError("pad aperture must lie in (pi, 2*pi)");
    const int d = resolved_diameter(erp_height);
    if (d < 2) throw ConfigError("disk diameter too small");
    if (d % scale != 0) throw ConfigError("scale must divide the disk diameter");
}

namespace {

void check_erp_shape(const ImageGrid& erp) {
    if (erp.width != 2 * erp.height) throw ConfigError("ERP input needs width == 2*height");
    if (erp.height == 0 || erp.channels == 0) throw ConfigError("empty ERP input");
}

}  // namespace

DualFisheye erp_to_dual_fisheye(const ImageGrid& erp, const DegradationConfig& cfg) {
    check_erp_shape(erp);
    cfg.validate(erp.height);

    const int d = cfg.resolved_diameter(erp.height);
    const ProjectionSpec erp_spec = ProjectionSpec::erp(erp.height, erp.width);
    const ProjectionSpec disk_spec = ProjectionSpec::fisheye(d, cfg.pad_aperture);
    const SampleSpec sample{SampleKernel::Bicubic, OobPolicy::WrapLongitude};

    DualFisheye out;
    WarpResult north = warp(erp, erp_spec, disk_spec, sample, cfg.threads);
    WarpResult south = warp(flip_vertical(erp), erp_spec, disk_spec, sample, cfg.threads);
    out.north = std::move(north.image);
    out.north_mask = std::move(north.mask);
    out.south = std::move(south.image);
    out.south_mask = std::move(south.mask);
    return out;
}

ImageGrid fisheye_downsample(const ImageGrid& erp_hr, const DegradationConfig& cfg) {
    check_erp_shape(erp_hr);
    cfg.validate(erp_hr.height);
    if (erp_hr.height % cfg.scale != 0)
        throw ConfigError("scale must divide the ERP height");

    DualFisheye disks = erp_to_dual_fisheye(erp_hr, cfg);
    const int d_lr = cfg.resolved_diameter(erp_hr.height) / cfg.scale;
    const ImageGrid north_lr = resize_antialiased(disks.north, d_lr, d_lr);
    const ImageGrid south_lr = resize_antialiased(disks.south, d_lr, d_lr);

    const int h_lr = erp_hr.height / cfg.scale;
    const int w_lr = erp_hr.width / cfg.scale;
    const ProjectionSpec out_spec = ProjectionSpec::erp(h_lr, w_lr);
    const ProjectionSpec disk_lr_spec = ProjectionSpec::fisheye(d_lr, cfg.pad_aperture);

    ImageGrid out(h_lr, w_lr, erp_hr.channels);
    parallel_for(h_lr, cfg.threads, [&](int r) {
        std::vector<double> px(erp_hr.channels);
        for (int c = 0; c < w_lr; ++c) {
            geom::SphericalCoord s = geom::sphere_from_erp(geom::plane_from_pixel(out_spec, r, c));
            const bool northern = s.phi >= 0.0;
            if (!northern) s.phi = -s.phi;  // the south disk renders the flipped sphere
            const geom::Projected pr = geom::fisheye_from_sphere(s, disk_lr_spec);
            const geom::PixelCoord pc = geom::pixel_from_plane(disk_lr_spec, pr.point);
            bicubic_sample(northern ? north_lr : south_lr, pc.col, pc.row, OobPolicy::ClampEdge, px);
            double* dst = out.pixel(r, c);
            for (int ch = 0; ch < erp_hr.channels; ++ch) dst[ch] = px[ch];
        }
    });
    return out;
}

ImageGrid erp_downsample(const ImageGrid& erp_hr, int scale) {
    check_erp_shape(erp_hr);
    if (scale < 1) throw ConfigError("scale must be >= 1");
    if (erp_hr.height % scale != 0) throw ConfigError("scale must divide the ERP height");
    return resize_antialiased(erp_hr, erp_hr.height / scale, erp_hr.width / scale);
}

}  // namespace odikit
