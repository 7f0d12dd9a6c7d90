#include "odikit/distortion_blocks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "odikit/geometry.hpp"

namespace odikit::dmod {

Tensor3 build_cd(int rows, int cols) {
    if (rows < 1 || cols < 1) throw ConfigError("condition map needs positive dimensions");
    Tensor3 cd(1, rows, cols);
    for (int m = 0; m < rows; ++m) {
        const double v = std::cos((m + 0.5 - rows / 2.0) / rows * geom::kPi);
        for (int n = 0; n < cols; ++n) cd.at(0, m, n) = v;
    }
    return cd;
}

Tensor3 build_cw(int height, int width, int window) {
    if (window < 1) throw ConfigError("window must be >= 1");
    if (height % window != 0 || width % window != 0)
        throw IndivisibleWindow("window must divide both raster dimensions");
    Tensor3 cw(2, height, width);
    const auto encode = [&](int j) {
        return window == 1 ? 0.0 : -1.0 + 2.0 * j / (window - 1);
    };
    for (int m = 0; m < height; ++m) {
        const double row_v = encode(m % window);
        for (int n = 0; n < width; ++n) {
            cw.at(0, m, n) = row_v;
            cw.at(1, m, n) = encode(n % window);
        }
    }
    return cw;
}

ConditionMaps build_condition_maps(int height, int width, int window) {
    return {build_cd(height, width), build_cw(height, width, window)};
}

Tensor3 offset_net_forward(const Tensor3& cond, const OffsetNetWeights& net) {
    if (cond.channels != net.in_channels)
        throw ShapeMismatch("condition channels do not match the offset net input");
    Tensor3 out(net.out_channels, cond.height, cond.width);
    std::vector<double> v0(net.in_channels), v1(net.hidden), v2(net.hidden);
    for (int m = 0; m < cond.height; ++m) {
        for (int n = 0; n < cond.width; ++n) {
            for (int c = 0; c < net.in_channels; ++c) v0[c] = cond.at(c, m, n);
            for (int o = 0; o < net.hidden; ++o) {
                double acc = net.b1[o];
                for (int c = 0; c < net.in_channels; ++c)
                    acc += static_cast<double>(net.w1[static_cast<size_t>(o) * net.in_channels + c]) * v0[c];
                v1[o] = std::max(acc, 0.0);
            }
            for (int o = 0; o < net.hidden; ++o) {
                double acc = net.b2[o];
                for (int c = 0; c < net.hidden; ++c)
                    acc += static_cast<double>(net.w2[static_cast<size_t>(o) * net.hidden + c]) * v1[c];
                v2[o] = std::max(acc, 0.0);
            }
            for (int o = 0; o < net.out_channels; ++o) {
                double acc = net.b3[o];
                for (int c = 0; c < net.hidden; ++c)
                    acc += static_cast<double>(net.w3[static_cast<size_t>(o) * net.hidden + c]) * v2[c];
                out.at(o, m, n) = acc;
            }
        }
    }
    return out;
}

namespace {

// Bilinear read of one tensor channel at fractional (row y, col x); taps
// outside the map contribute zero.
double bilinear_zero(const Tensor3& t, int ch, double y, double x) {
    const int r0 = static_cast<int>(std::floor(y));
    const int c0 = static_cast<int>(std::floor(x));
    const double fy = y - r0;
    const double fx = x - c0;
    double acc = 0.0;
    for (int dr = 0; dr < 2; ++dr) {
        const double wr = dr == 0 ? 1.0 - fy : fy;
        if (wr == 0.0) continue;
        const int r = r0 + dr;
        if (r < 0 || r >= t.height) continue;
        for (int dc = 0; dc < 2; ++dc) {
            const double wc = dc == 0 ? 1.0 - fx : fx;
            if (wc == 0.0) continue;
            const int c = c0 + dc;
            if (c < 0 || c >= t.width) continue;
            acc += wr * wc * t.at(ch, r, c);
        }
    }
    return acc;
}

void softmax_inplace(std::vector<double>& row) {
    const double m = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
        v = std::exp(v - m);
        total += v;
    }
    for (double& v : row) v /= total;
}

std::vector<float> random_floats(std::mt19937_64& rng, size_t n, double sigma) {
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<float> out(n);
    for (auto& v : out) v = static_cast<float>(dist(rng));
    return out;
}

OffsetNetWeights random_offset_net(std::mt19937_64& rng, int in, int hidden, int out) {
    OffsetNetWeights net;
    net.in_channels = in;
    net.hidden = hidden;
    net.out_channels = out;
    net.w1 = random_floats(rng, static_cast<size_t>(hidden) * in, 0.05);
    net.b1 = random_floats(rng, hidden, 0.05);
    net.w2 = random_floats(rng, static_cast<size_t>(hidden) * hidden, 0.05);
    net.b2 = random_floats(rng, hidden, 0.05);
    net.w3 = random_floats(rng, static_cast<size_t>(out) * hidden, 0.05);
    net.b3 = random_floats(rng, out, 0.05);
    return net;
}

}  // namespace

BlockWeights random_block_weights(int channels, int heads, int window, int hidden,
                                  uint64_t seed) {
    if (channels < 1 || heads < 1 || channels % heads != 0)
        throw ConfigError("channels must be a positive multiple of heads");
    if (window < 1 || hidden < 1) throw ConfigError("window and hidden must be >= 1");
    std::mt19937_64 rng(seed);
    BlockWeights w;
    w.channels = channels;
    w.heads = heads;
    w.window = window;
    w.hidden = hidden;
    w.daab_offset = random_offset_net(rng, 3, hidden, 2);
    w.attn.channels = channels;
    w.attn.wq = random_floats(rng, static_cast<size_t>(channels) * channels, 0.2);
    w.attn.wk = random_floats(rng, static_cast<size_t>(channels) * channels, 0.2);
    w.attn.wv = random_floats(rng, static_cast<size_t>(channels) * channels, 0.2);
    w.dacb_offset = random_offset_net(rng, 1, hidden, 18);
    w.conv.out_channels = channels;
    w.conv.in_channels = channels;
    w.conv.filter = random_floats(rng, static_cast<size_t>(channels) * channels * 9, 0.2);
    w.conv.bias = random_floats(rng, channels, 0.05);
    return w;
}

BlockResult daab_forward(const Tensor3& features, const ConditionMaps& cond,
                         const BlockWeights& weights) {
    const int C = features.channels, H = features.height, W = features.width;
    const int win = weights.window, heads = weights.heads;
    if (C != weights.channels) throw ShapeMismatch("feature channels do not match weights");
    if (C % heads != 0) throw ShapeMismatch("channels must divide evenly across heads");
    if (H % win != 0 || W % win != 0)
        throw IndivisibleWindow("window must divide the feature map dimensions");
    if (cond.c_d.height != H || cond.c_d.width != W || cond.c_w.height != H || cond.c_w.width != W)
        throw ShapeMismatch("condition maps do not match the feature map");

    // Offsets depend on the condition maps only, never on the features.
    Tensor3 stacked(3, H, W);
    for (int m = 0; m < H; ++m)
        for (int n = 0; n < W; ++n) {
            stacked.at(0, m, n) = cond.c_d.at(0, m, n);
            stacked.at(1, m, n) = cond.c_w.at(0, m, n);
            stacked.at(2, m, n) = cond.c_w.at(1, m, n);
        }
    Tensor3 offsets = offset_net_forward(stacked, weights.daab_offset);

    // One warp shared by every head.
    Tensor3 warped(C, H, W);
    for (int m = 0; m < H; ++m)
        for (int n = 0; n < W; ++n) {
            const double y = m + offsets.at(0, m, n);
            const double x = n + offsets.at(1, m, n);
            for (int c = 0; c < C; ++c) warped.at(c, m, n) = bilinear_zero(features, c, y, x);
        }

    const int tokens = win * win;
    const int head_dim = C / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
    Tensor3 out(C, H, W);
    std::vector<double> q(static_cast<size_t>(tokens) * C), k(q.size()), v(q.size());
    std::vector<double> scores(tokens);

    for (int wr = 0; wr < H; wr += win) {
        for (int wc = 0; wc < W; wc += win) {
            for (int t = 0; t < tokens; ++t) {
                const int m = wr + t / win;
                const int n = wc + t % win;
                for (int j = 0; j < C; ++j) {
                    double aq = 0.0, ak = 0.0, av = 0.0;
                    for (int i = 0; i < C; ++i) {
                        const double fi = features.at(i, m, n);
                        const double wi = warped.at(i, m, n);
                        aq += fi * static_cast<double>(weights.attn.wq[static_cast<size_t>(i) * C + j]);
                        ak += wi * static_cast<double>(weights.attn.wk[static_cast<size_t>(i) * C + j]);
                        av += wi * static_cast<double>(weights.attn.wv[static_cast<size_t>(i) * C + j]);
                    }
                    q[static_cast<size_t>(t) * C + j] = aq;
                    k[static_cast<size_t>(t) * C + j] = ak;
                    v[static_cast<size_t>(t) * C + j] = av;
                }
            }
            for (int h = 0; h < heads; ++h) {
                const int base = h * head_dim;
                for (int t1 = 0; t1 < tokens; ++t1) {
                    for (int t2 = 0; t2 < tokens; ++t2) {
                        double acc = 0.0;
                        for (int d = 0; d < head_dim; ++d)
                            acc += q[static_cast<size_t>(t1) * C + base + d] *
                                   k[static_cast<size_t>(t2) * C + base + d];
                        scores[t2] = acc * scale;
                    }
                    softmax_inplace(scores);
                    const int m = wr + t1 / win;
                    const int n = wc + t1 % win;
                    for (int d = 0; d < head_dim; ++d) {
                        double acc = 0.0;
                        for (int t2 = 0; t2 < tokens; ++t2)
                            acc += scores[t2] * v[static_cast<size_t>(t2) * C + base + d];
                        out.at(base + d, m, n) = acc;
                    }
                }
            }
        }
    }
    return {std::move(out), std::move(offsets)};
}

BlockResult dacb_forward(const Tensor3& features, const Tensor3& c_d,
                         const BlockWeights& weights) {
    const int C = features.channels, H = features.height, W = features.width;
    if (C != weights.conv.in_channels) throw ShapeMismatch("feature channels do not match filter bank");
    if (c_d.channels != 1 || c_d.height != H || c_d.width != W)
        throw ShapeMismatch("latitude map does not match the feature map");

    Tensor3 offsets = offset_net_forward(c_d, weights.dacb_offset);  // 18 x H x W

    const int C_out = weights.conv.out_channels;
    Tensor3 out(C_out, H, W);
    for (int m = 0; m < H; ++m) {
        for (int n = 0; n < W; ++n) {
            for (int o = 0; o < C_out; ++o) out.at(o, m, n) = weights.conv.bias[o];
            for (int t = 0; t < 9; ++t) {
                const int tap_dy = t / 3 - 1;
                const int tap_dx = t % 3 - 1;
                const double y = m + tap_dy + offsets.at(2 * t, m, n);
                const double x = n + tap_dx + offsets.at(2 * t + 1, m, n);
                for (int ci = 0; ci < C; ++ci) {
                    const double sample = bilinear_zero(features, ci, y, x);
                    if (sample == 0.0) continue;
                    for (int o = 0; o < C_out; ++o) {
                        const size_t idx = (static_cast<size_t>(o) * C + ci) * 9 + t;
                        out.at(o, m, n) += static_cast<double>(weights.conv.filter[idx]) * sample;
                    }
                }
            }
        }
    }
    return {std::move(out), std::move(offsets)};
}

ImageGrid offsets_heatmap(const Tensor3& field, int stride) {
    if (field.channels < 2 || field.channels % 2 != 0)
        throw ShapeMismatch("offset field needs an even channel count");
    if (stride < 1) throw ConfigError("stride must be >= 1");
    const int pairs = field.channels / 2;
    ImageGrid out(field.height, field.width, 3);
    for (int m = 0; m < field.height; m += stride) {
        for (int n = 0; n < field.width; n += stride) {
            double mag = 0.0;
            for (int t = 0; t < pairs; ++t) {
                const double dy = field.at(2 * t, m, n);
                const double dx = field.at(2 * t + 1, m, n);
                mag += std::hypot(dy, dx);
                const int rr = static_cast<int>(std::lround(m + dy));
                const int cc = static_cast<int>(std::lround(n + dx));
                if (rr >= 0 && rr < out.height && cc >= 0 && cc < out.width)
                    out.at(rr, cc, 0) = 1.0;  // displaced point
            }
            out.at(m, n, 1) = 1.0;  // reference point
            out.at(m, n, 2) = std::clamp(mag / pairs, 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace odikit::dmod
