#pragma once

#include "odikit/image.hpp"
#include "odikit/warp.hpp"

namespace odikit {

/// Settings for the fisheye-domain degradation. The dual disks are
/// horizontally spliced: disk 0 covers the northern hemisphere (axis at the
/// north pole), disk 1 the southern one via the exact latitude flip. Each
/// disk is rendered with an aperture wider than pi so downsampling kernels
/// near the hemisphere rim see real neighbors instead of a cut edge.
struct DegradationConfig {
    int scale = 2;                                     // production scales: 2, 4, 8, 16
    double pad_aperture = 2.0 * geom::kPi * 200.0 / 360.0;  // > pi
    int disk_diameter = 0;                             // 0: use the ERP height
    int threads = 1;

    int resolved_diameter(int erp_height) const {
        return disk_diameter > 0 ? disk_diameter : erp_height;
    }
    /// Throws ConfigError on invariant breaches (pad aperture outside
    /// (pi, 2*pi), scale < 1, scale not dividing the disk diameter).
    void validate(int erp_height) const;
};

struct DualFisheye {
    ImageGrid north;
    ImageGrid south;
    ValidityMask north_mask;  // true inside the padded disk
    ValidityMask south_mask;
};

/// Renders the two padded fisheye disks of an ERP image (width == 2*height).
DualFisheye erp_to_dual_fisheye(const ImageGrid& erp, const DegradationConfig& cfg);

/// Full fisheye-domain degradation: dual disks, anti-aliased 1/scale
/// downsample of each, reconversion to an ERP of size (H/scale, W/scale).
/// Hemispheres are split hard at the equator (phi >= 0 reads the north
/// disk). scale == 1 is permitted for round-trip studies.
ImageGrid fisheye_downsample(const ImageGrid& erp_hr, const DegradationConfig& cfg);

/// The conventional degradation: anti-aliased bicubic downsample applied to
/// the ERP raster directly.
ImageGrid erp_downsample(const ImageGrid& erp_hr, int scale);

}  // namespace odikit
