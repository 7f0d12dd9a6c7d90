#pragma once

#include "odikit/image.hpp"

namespace odikit::metrics {

/// Per-pixel nonnegative weights with the spatial shape of the rasters they
/// pool.
struct WeightMap {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    double at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }
};

/// cos-latitude ERP weights: w(m, n) = cos(((m + 0.5)/M - 0.5) * pi),
/// constant across columns and strictly positive for finite M.
WeightMap erp_weights(int height, int width);

WeightMap constant_weights(int height, int width, double value = 1.0);

inline constexpr double kPsnrCap = 99.0;  // reported for identical images

/// PSNR in dB over unit-range values; multi-channel inputs are collapsed to
/// their channel mean first. Capped at kPsnrCap.
double psnr(const ImageGrid& a, const ImageGrid& b);

/// PSNR with spatially weighted MSE.
double ws_psnr(const ImageGrid& a, const ImageGrid& b, const WeightMap& w);

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2,
/// C2 = 0.03^2 on unit range, valid-region convolution (no padding), mean
/// pooled over the interior map. Requires min side >= 11.
double ssim(const ImageGrid& a, const ImageGrid& b);

/// SSIM map pooled with WeightMap weights (cropped to the valid interior).
double ws_ssim(const ImageGrid& a, const ImageGrid& b, const WeightMap& w);

/// PSNR restricted to rows whose pixel-center latitude satisfies
/// |phi| < band (radians); used for projection round-trip studies where the
/// polar caps are out of scope.
double psnr_latitude_band(const ImageGrid& a, const ImageGrid& b, double band);

}  // namespace odikit::metrics
