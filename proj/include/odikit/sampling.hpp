#pragma once

#include <span>
#include <vector>

#include "odikit/image.hpp"

namespace odikit {

enum class SampleKernel {
    Bilinear,  // 2x2 neighborhood
    Bicubic,   // 4x4 Catmull-Rom neighborhood (a = -0.5)
};

enum class OobPolicy {
    Zero,           // taps outside the raster contribute 0
    ClampEdge,      // taps clamp to the nearest edge pixel
    WrapLongitude,  // columns wrap, rows clamp; only meaningful for ERP sources
};

struct SampleSpec {
    SampleKernel kernel = SampleKernel::Bilinear;
    OobPolicy out_of_bounds = OobPolicy::ClampEdge;
};

/// Catmull-Rom cubic kernel (a = -0.5), support 2.
double cubic_kernel(double x);

/// Samples img at fractional pixel position (col x, row y); integer
/// coordinates are pixel centers. Writes one value per channel into `out`
/// (out.size() must equal img.channels).
void bilinear_sample(const ImageGrid& img, double x, double y, OobPolicy oob,
                     std::span<double> out);
void bicubic_sample(const ImageGrid& img, double x, double y, OobPolicy oob,
                    std::span<double> out);

/// Convenience dispatch on SampleSpec.
void sample_at(const ImageGrid& img, double x, double y, const SampleSpec& spec,
               std::span<double> out);

/// Allocating convenience wrapper.
std::vector<double> bilinear_sample(const ImageGrid& img, double x, double y, OobPolicy oob);

}  // namespace odikit
