#include "odikit/warp.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <vector>

#include "odikit/parallel.hpp"

namespace odikit {

using geom::ProjectionKind;
using geom::ProjectionSpec;
using geom::ProjectStatus;

namespace {

bool dst_in_domain(const ProjectionSpec& spec, const geom::PlaneCoord& p) {
    if (spec.kind == ProjectionKind::Fisheye) return std::hypot(p.x, p.y) <= 1.0;
    return true;  // ERP and perspective rasters cover their own domain
}

std::optional<geom::SphericalCoord> dst_to_sphere(const ProjectionSpec& spec,
                                                  const geom::PlaneCoord& p) {
    switch (spec.kind) {
        case ProjectionKind::Erp:
            return geom::sphere_from_erp(p);
        case ProjectionKind::Fisheye:
            return geom::sphere_from_fisheye_extended(p, spec);
        case ProjectionKind::Perspective:
            return geom::sphere_from_perspective(p, spec);
    }
    return std::nullopt;
}

geom::Projected src_from_sphere(const ProjectionSpec& spec, const geom::SphericalCoord& s) {
    switch (spec.kind) {
        case ProjectionKind::Erp:
            return {geom::erp_from_sphere(s), ProjectStatus::Ok};
        case ProjectionKind::Fisheye:
            return geom::fisheye_from_sphere(s, spec);
        case ProjectionKind::Perspective:
            return geom::perspective_from_sphere(s, spec);
    }
    return {};
}

}  // namespace

WarpResult warp(const ImageGrid& src, const ProjectionSpec& src_spec,
                const ProjectionSpec& dst_spec, const SampleSpec& sample, int threads) {
    src_spec.validate();
    dst_spec.validate();
    if (src.height != src_spec.height || src.width != src_spec.width)
        throw ShapeMismatch("source raster does not match its projection spec");
    if (src.height == 0 || src.width == 0 || src.channels == 0)
        throw ConfigError("empty source raster");
    if (sample.out_of_bounds == OobPolicy::WrapLongitude && src_spec.kind != ProjectionKind::Erp)
        throw ConfigError("WrapLongitude is only valid for ERP sources");

    WarpResult out;
    out.image = ImageGrid(dst_spec.height, dst_spec.width, src.channels);
    out.mask = ValidityMask(dst_spec.height, dst_spec.width, false);
    std::atomic<bool> unprojectable{false};

    parallel_for(dst_spec.height, threads, [&](int r) {
        std::vector<double> px(src.channels);
        for (int c = 0; c < dst_spec.width; ++c) {
            const geom::PlaneCoord dp = geom::plane_from_pixel(dst_spec, r, c);
            const bool in_domain = dst_in_domain(dst_spec, dp);
            // Zero policy promises masked-false pixels stay exactly zero, so
            // the out-of-domain extension only runs under other policies.
            if (!in_domain && sample.out_of_bounds == OobPolicy::Zero) continue;
            const auto s = dst_to_sphere(dst_spec, dp);
            if (!s) continue;  // stays zero, mask false

            const geom::Projected pr = src_from_sphere(src_spec, *s);
            if (!pr.ok()) {
                if (sample.out_of_bounds != OobPolicy::Zero) unprojectable = true;
                continue;
            }
            const geom::PixelCoord pc = geom::pixel_from_plane(src_spec, pr.point);
            sample_at(src, pc.col, pc.row, sample, px);
            double* dst = out.image.pixel(r, c);
            for (int ch = 0; ch < src.channels; ++ch) dst[ch] = px[ch];
            out.mask.set(r, c, in_domain);
        }
    });

    if (unprojectable)
        throw IncompatibleSpecs(
            "destination needs coverage the source cannot provide; use OobPolicy::Zero to mask");
    return out;
}

}  // namespace odikit
