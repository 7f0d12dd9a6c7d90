#include "odikit/resize.hpp"

#include <cmath>
#include <vector>

#include "odikit/sampling.hpp"

namespace odikit {

namespace {

struct AxisCoeffs {
    std::vector<int> first;       // first source index per output position
    std::vector<int> count;       // taps per output position
    std::vector<double> weights;  // taps, packed per output position
    int max_count = 0;
};

AxisCoeffs precompute_coeffs(int in_size, int out_size) {
    const double scale = static_cast<double>(in_size) / out_size;
    const double filterscale = std::max(scale, 1.0);
    const double support = 2.0 * filterscale;

    AxisCoeffs co;
    co.first.resize(out_size);
    co.count.resize(out_size);
    co.max_count = static_cast<int>(std::ceil(support)) * 2 + 1;
    co.weights.assign(static_cast<size_t>(out_size) * co.max_count, 0.0);

    for (int i = 0; i < out_size; ++i) {
        const double center = (i + 0.5) * scale;
        int xmin = static_cast<int>(center - support + 0.5);
        if (xmin < 0) xmin = 0;
        int xmax = static_cast<int>(center + support + 0.5);
        if (xmax > in_size) xmax = in_size;

        double* w = co.weights.data() + static_cast<size_t>(i) * co.max_count;
        double total = 0.0;
        for (int j = xmin; j < xmax; ++j) {
            const double v = cubic_kernel((j + 0.5 - center) / filterscale);
            w[j - xmin] = v;
            total += v;
        }
        if (total != 0.0) {
            for (int j = 0; j < xmax - xmin; ++j) w[j] /= total;
        }
        co.first[i] = xmin;
        co.count[i] = xmax - xmin;
    }
    return co;
}

ImageGrid resize_horizontal(const ImageGrid& img, int out_w) {
    const AxisCoeffs co = precompute_coeffs(img.width, out_w);
    ImageGrid out(img.height, out_w, img.channels);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < out_w; ++c) {
            const double* w = co.weights.data() + static_cast<size_t>(c) * co.max_count;
            double* dst = out.pixel(r, c);
            for (int j = 0; j < co.count[c]; ++j) {
                const double* src = img.pixel(r, co.first[c] + j);
                for (int ch = 0; ch < img.channels; ++ch) dst[ch] += w[j] * src[ch];
            }
        }
    }
    return out;
}

ImageGrid resize_vertical(const ImageGrid& img, int out_h) {
    const AxisCoeffs co = precompute_coeffs(img.height, out_h);
    ImageGrid out(out_h, img.width, img.channels);
    for (int r = 0; r < out_h; ++r) {
        const double* w = co.weights.data() + static_cast<size_t>(r) * co.max_count;
        for (int j = 0; j < co.count[r]; ++j) {
            const double* src_row = img.pixel(co.first[r] + j, 0);
            double* dst_row = out.pixel(r, 0);
            const size_t n = static_cast<size_t>(img.width) * img.channels;
            for (size_t k = 0; k < n; ++k) dst_row[k] += w[j] * src_row[k];
        }
    }
    return out;
}

}  // namespace

ImageGrid resize_antialiased(const ImageGrid& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw ConfigError("output dimensions must be >= 1");
    if (img.height == 0 || img.width == 0) throw ConfigError("empty input raster");
    // The axis with the larger reduction runs first.
    const double rh = static_cast<double>(img.height) / out_h;
    const double rw = static_cast<double>(img.width) / out_w;
    if (rw >= rh) return resize_vertical(resize_horizontal(img, out_w), out_h);
    return resize_horizontal(resize_vertical(img, out_h), out_w);
}

}  // namespace odikit
