#pragma once

#include "odikit/geometry.hpp"
#include "odikit/image.hpp"
#include "odikit/sampling.hpp"

namespace odikit {

struct WarpResult {
    ImageGrid image;
    ValidityMask mask;
};

/// Converts a raster from one projection to another by inverse mapping: each
/// destination pixel center goes plane -> sphere -> source plane and gathers
/// from the source per SampleSpec. The mask is false where the destination
/// pixel lies outside its projection's nominal domain (e.g. a disk corner)
/// or where the sphere point cannot be projected into the source
/// (OutOfHemisphere, BehindCamera, OutsideFov).
///
/// With OobPolicy::Zero unprojectable pixels are masked and zero-filled;
/// with any other policy they raise IncompatibleSpecs, since clamping would
/// smear unrelated content. Fisheye destinations are evaluated past the disk
/// edge wherever the map stays valid, so square rasters carry usable values
/// under their false-masked corners.
///
/// Parallelizes over destination rows; results are identical for any thread
/// count.
WarpResult warp(const ImageGrid& src, const geom::ProjectionSpec& src_spec,
                const geom::ProjectionSpec& dst_spec, const SampleSpec& sample,
                int threads = 1);

}  // namespace odikit
