#include "odikit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "odikit/geometry.hpp"

namespace odikit::metrics {

WeightMap erp_weights(int height, int width) {
    WeightMap w;
    w.height = height;
    w.width = width;
    w.data.resize(static_cast<size_t>(height) * width);
    for (int m = 0; m < height; ++m) {
        const double v = std::cos(((m + 0.5) / height - 0.5) * geom::kPi);
        std::fill_n(w.data.begin() + static_cast<size_t>(m) * width, width, v);
    }
    return w;
}

WeightMap constant_weights(int height, int width, double value) {
    WeightMap w;
    w.height = height;
    w.width = width;
    w.data.assign(static_cast<size_t>(height) * width, value);
    return w;
}

namespace {

void check_pair(const ImageGrid& a, const ImageGrid& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("metric inputs differ in shape");
    if (a.height == 0 || a.width == 0 || a.channels == 0) throw ShapeMismatch("empty metric input");
}

void check_weights(const ImageGrid& a, const WeightMap& w) {
    if (w.height != a.height || w.width != a.width)
        throw ShapeMismatch("weight map does not match raster shape");
}

double weighted_mse(const ImageGrid& ga, const ImageGrid& gb, const WeightMap* w) {
    double num = 0.0, den = 0.0;
    for (int r = 0; r < ga.height; ++r) {
        for (int c = 0; c < ga.width; ++c) {
            const double e = ga.at(r, c, 0) - gb.at(r, c, 0);
            const double wt = w ? w->at(r, c) : 1.0;
            num += wt * e * e;
            den += wt;
        }
    }
    return den > 0.0 ? num / den : 0.0;
}

double mse_to_db(double mse) {
    if (mse <= 0.0) return kPsnrCap;
    return std::min(10.0 * std::log10(1.0 / mse), kPsnrCap);
}

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::vector<double> gaussian_window() {
    std::vector<double> g(kSsimWindow);
    const double c = (kSsimWindow - 1) / 2.0;
    double total = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        g[i] = std::exp(-(i - c) * (i - c) / (2.0 * kSsimSigma * kSsimSigma));
        total += g[i];
    }
    for (double& v : g) v /= total;
    return g;
}

// Separable valid-region Gaussian filter of a single-channel grid.
ImageGrid gauss_valid(const ImageGrid& img) {
    const std::vector<double> g = gaussian_window();
    const int oh = img.height - kSsimWindow + 1;
    const int ow = img.width - kSsimWindow + 1;
    ImageGrid tmp(img.height, ow, 1);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int k = 0; k < kSsimWindow; ++k) acc += g[k] * img.at(r, c + k, 0);
            tmp.at(r, c, 0) = acc;
        }
    ImageGrid out(oh, ow, 1);
    for (int r = 0; r < oh; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int k = 0; k < kSsimWindow; ++k) acc += g[k] * tmp.at(r + k, c, 0);
            out.at(r, c, 0) = acc;
        }
    return out;
}

ImageGrid hadamard(const ImageGrid& a, const ImageGrid& b) {
    ImageGrid out(a.height, a.width, 1);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = a.data[i] * b.data[i];
    return out;
}

// Per-pixel SSIM map over the valid interior ((H-10) x (W-10)).
ImageGrid ssim_map(const ImageGrid& a, const ImageGrid& b) {
    const ImageGrid ga = channel_mean(a);
    const ImageGrid gb = channel_mean(b);
    const ImageGrid mu_a = gauss_valid(ga);
    const ImageGrid mu_b = gauss_valid(gb);
    const ImageGrid m_aa = gauss_valid(hadamard(ga, ga));
    const ImageGrid m_bb = gauss_valid(hadamard(gb, gb));
    const ImageGrid m_ab = gauss_valid(hadamard(ga, gb));

    ImageGrid map(mu_a.height, mu_a.width, 1);
    for (size_t i = 0; i < map.data.size(); ++i) {
        const double ma = mu_a.data[i], mb = mu_b.data[i];
        const double va = m_aa.data[i] - ma * ma;
        const double vb = m_bb.data[i] - mb * mb;
        const double cov = m_ab.data[i] - ma * mb;
        map.data[i] = ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
                      ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
    }
    return map;
}

}  // namespace

double psnr(const ImageGrid& a, const ImageGrid& b) {
    check_pair(a, b);
    return mse_to_db(weighted_mse(channel_mean(a), channel_mean(b), nullptr));
}

double ws_psnr(const ImageGrid& a, const ImageGrid& b, const WeightMap& w) {
    check_pair(a, b);
    check_weights(a, w);
    return mse_to_db(weighted_mse(channel_mean(a), channel_mean(b), &w));
}

double ssim(const ImageGrid& a, const ImageGrid& b) {
    check_pair(a, b);
    if (a.height < kSsimWindow || a.width < kSsimWindow)
        throw TooSmall("SSIM needs min side >= 11");
    const ImageGrid map = ssim_map(a, b);
    double total = 0.0;
    for (double v : map.data) total += v;
    return total / static_cast<double>(map.data.size());
}

double ws_ssim(const ImageGrid& a, const ImageGrid& b, const WeightMap& w) {
    check_pair(a, b);
    check_weights(a, w);
    if (a.height < kSsimWindow || a.width < kSsimWindow)
        throw TooSmall("SSIM needs min side >= 11");
    const ImageGrid map = ssim_map(a, b);
    const int off = (kSsimWindow - 1) / 2;  // interior offset into the weight map
    double num = 0.0, den = 0.0;
    for (int r = 0; r < map.height; ++r)
        for (int c = 0; c < map.width; ++c) {
            const double wt = w.at(r + off, c + off);
            num += wt * map.at(r, c, 0);
            den += wt;
        }
    return den > 0.0 ? num / den : 0.0;
}

double psnr_latitude_band(const ImageGrid& a, const ImageGrid& b, double band) {
    check_pair(a, b);
    const ImageGrid ga = channel_mean(a);
    const ImageGrid gb = channel_mean(b);
    double acc = 0.0;
    size_t n = 0;
    for (int r = 0; r < ga.height; ++r) {
        const double phi = geom::kPi / 2.0 - (r + 0.5) / ga.height * geom::kPi;
        if (std::fabs(phi) >= band) continue;
        for (int c = 0; c < ga.width; ++c) {
            const double e = ga.at(r, c, 0) - gb.at(r, c, 0);
            acc += e * e;
            ++n;
        }
    }
    if (n == 0) throw ConfigError("latitude band contains no rows");
    return mse_to_db(acc / static_cast<double>(n));
}

}  // namespace odikit::metrics
