#include "odikit/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace odikit {

double cubic_kernel(double x) {
    x = std::fabs(x);
    if (x < 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
    if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
    return 0.0;
}

namespace {

// Resolves a tap index against an axis of length n; returns -1 when the tap
// contributes nothing (Zero policy outside the raster).
inline int resolve_tap(int i, int n, OobPolicy oob, bool is_column) {
    if (i >= 0 && i < n) return i;
    switch (oob) {
        case OobPolicy::Zero:
            return -1;
        case OobPolicy::ClampEdge:
            return std::clamp(i, 0, n - 1);
        case OobPolicy::WrapLongitude:
            if (is_column) {
                int m = i % n;
                if (m < 0) m += n;
                return m;
            }
            return std::clamp(i, 0, n - 1);
    }
    return -1;
}

}  // namespace

void bilinear_sample(const ImageGrid& img, double x, double y, OobPolicy oob,
                     std::span<double> out) {
    const int c0 = static_cast<int>(std::floor(x));
    const int r0 = static_cast<int>(std::floor(y));
    const double fx = x - c0;
    const double fy = y - r0;
    const double wc[2] = {1.0 - fx, fx};
    const double wr[2] = {1.0 - fy, fy};

    std::fill(out.begin(), out.end(), 0.0);
    for (int dr = 0; dr < 2; ++dr) {
        if (wr[dr] == 0.0) continue;
        const int r = resolve_tap(r0 + dr, img.height, oob, false);
        if (r < 0) continue;
        for (int dc = 0; dc < 2; ++dc) {
            if (wc[dc] == 0.0) continue;
            const int c = resolve_tap(c0 + dc, img.width, oob, true);
            if (c < 0) continue;
            const double w = wr[dr] * wc[dc];
            const double* p = img.pixel(r, c);
            for (int ch = 0; ch < img.channels; ++ch) out[ch] += w * p[ch];
        }
    }
}

void bicubic_sample(const ImageGrid& img, double x, double y, OobPolicy oob,
                    std::span<double> out) {
    const int c0 = static_cast<int>(std::floor(x));
    const int r0 = static_cast<int>(std::floor(y));
    const double fx = x - c0;
    const double fy = y - r0;

    double wc[4], wr[4];
    for (int k = 0; k < 4; ++k) {
        wc[k] = cubic_kernel(fx - (k - 1));
        wr[k] = cubic_kernel(fy - (k - 1));
    }

    std::fill(out.begin(), out.end(), 0.0);
    for (int dr = 0; dr < 4; ++dr) {
        if (wr[dr] == 0.0) continue;
        const int r = resolve_tap(r0 - 1 + dr, img.height, oob, false);
        if (r < 0) continue;
        for (int dc = 0; dc < 4; ++dc) {
            if (wc[dc] == 0.0) continue;
            const int c = resolve_tap(c0 - 1 + dc, img.width, oob, true);
            if (c < 0) continue;
            const double w = wr[dr] * wc[dc];
            const double* p = img.pixel(r, c);
            for (int ch = 0; ch < img.channels; ++ch) out[ch] += w * p[ch];
        }
    }
}

void sample_at(const ImageGrid& img, double x, double y, const SampleSpec& spec,
               std::span<double> out) {
    if (spec.kernel == SampleKernel::Bilinear)
        bilinear_sample(img, x, y, spec.out_of_bounds, out);
    else
        bicubic_sample(img, x, y, spec.out_of_bounds, out);
}

std::vector<double> bilinear_sample(const ImageGrid& img, double x, double y, OobPolicy oob) {
    std::vector<double> out(img.channels);
    bilinear_sample(img, x, y, oob, out);
    return out;
}

}  // namespace odikit
