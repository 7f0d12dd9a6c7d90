#pragma once

#include "odikit/image.hpp"

namespace odikit {

/// Separable bicubic rescaler (a = -0.5) with kernel support scaled by the
/// downscale factor, so shrinking averages over the full source footprint
/// instead of point-sampling it. Weights are renormalized at the borders.
ImageGrid resize_antialiased(const ImageGrid& img, int out_h, int out_w);

}  // namespace odikit
