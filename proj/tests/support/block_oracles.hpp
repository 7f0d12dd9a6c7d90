#pragma once

#include <cmath>
#include <vector>

#include "odikit/distortion_blocks.hpp"

// Loop-level reference implementations used to verify the block forwards.
// Deliberately independent of the library's code paths.

namespace odikit::testsupport {

inline double oracle_bilinear(const dmod::Tensor3& t, int ch, double y, double x) {
    const int r0 = static_cast<int>(std::floor(y)), c0 = static_cast<int>(std::floor(x));
    const double fy = y - r0, fx = x - c0;
    const auto tap = [&](int r, int c) {
        if (r < 0 || r >= t.height || c < 0 || c >= t.width) return 0.0;
        return t.at(ch, r, c);
    };
    return (1 - fy) * (1 - fx) * tap(r0, c0) + (1 - fy) * fx * tap(r0, c0 + 1) +
           fy * (1 - fx) * tap(r0 + 1, c0) + fy * fx * tap(r0 + 1, c0 + 1);
}

/// Window attention with explicit token loops; the map supplying keys and
/// values may differ from the query source (pass the same map for the
/// standard block).
inline dmod::Tensor3 oracle_window_attention(const dmod::Tensor3& fq, const dmod::Tensor3& fkv,
                                             const dmod::AttentionWeights& aw, int window,
                                             int heads) {
    const int C = fq.channels, H = fq.height, W = fq.width;
    const int T = window * window, d = C / heads;
    dmod::Tensor3 out(C, H, W);
    for (int wr = 0; wr < H; wr += window)
        for (int wc = 0; wc < W; wc += window) {
            std::vector<std::vector<double>> q(T, std::vector<double>(C, 0.0)), k = q, v = q;
            for (int t = 0; t < T; ++t) {
                const int m = wr + t / window, n = wc + t % window;
                for (int j = 0; j < C; ++j)
                    for (int i = 0; i < C; ++i) {
                        q[t][j] += fq.at(i, m, n) * aw.wq[static_cast<size_t>(i) * C + j];
                        k[t][j] += fkv.at(i, m, n) * aw.wk[static_cast<size_t>(i) * C + j];
                        v[t][j] += fkv.at(i, m, n) * aw.wv[static_cast<size_t>(i) * C + j];
                    }
            }
            for (int h = 0; h < heads; ++h)
                for (int t1 = 0; t1 < T; ++t1) {
                    std::vector<double> score(T, 0.0);
                    double mx = -1e300;
                    for (int t2 = 0; t2 < T; ++t2) {
                        for (int e = 0; e < d; ++e) score[t2] += q[t1][h * d + e] * k[t2][h * d + e];
                        score[t2] /= std::sqrt(static_cast<double>(d));
                        mx = std::max(mx, score[t2]);
                    }
                    double total = 0.0;
                    for (int t2 = 0; t2 < T; ++t2) {
                        score[t2] = std::exp(score[t2] - mx);
                        total += score[t2];
                    }
                    const int m = wr + t1 / window, n = wc + t1 % window;
                    for (int e = 0; e < d; ++e) {
                        double acc = 0.0;
                        for (int t2 = 0; t2 < T; ++t2) acc += score[t2] / total * v[t2][h * d + e];
                        out.at(h * d + e, m, n) = acc;
                    }
                }
        }
    return out;
}

inline dmod::Tensor3 oracle_conv3x3_zero_pad(const dmod::Tensor3& f, const dmod::ConvWeights& cw) {
    dmod::Tensor3 out(cw.out_channels, f.height, f.width);
    for (int o = 0; o < cw.out_channels; ++o)
        for (int m = 0; m < f.height; ++m)
            for (int n = 0; n < f.width; ++n) {
                double acc = cw.bias[o];
                for (int i = 0; i < cw.in_channels; ++i)
                    for (int dy = -1; dy <= 1; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int r = m + dy, c = n + dx;
                            if (r < 0 || r >= f.height || c < 0 || c >= f.width) continue;
                            const int tap = (dy + 1) * 3 + (dx + 1);
                            acc += cw.filter[(static_cast<size_t>(o) * cw.in_channels + i) * 9 + tap] *
                                   f.at(i, r, c);
                        }
                out.at(o, m, n) = acc;
            }
    return out;
}

inline void zero_offset_net(dmod::OffsetNetWeights& net) {
    std::fill(net.w1.begin(), net.w1.end(), 0.0f);
    std::fill(net.b1.begin(), net.b1.end(), 0.0f);
    std::fill(net.w2.begin(), net.w2.end(), 0.0f);
    std::fill(net.b2.begin(), net.b2.end(), 0.0f);
    std::fill(net.w3.begin(), net.w3.end(), 0.0f);
    std::fill(net.b3.begin(), net.b3.end(), 0.0f);
}

inline double tensor_max_abs_diff(const dmod::Tensor3& a, const dmod::Tensor3& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::fabs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace odikit::testsupport
