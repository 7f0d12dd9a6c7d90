#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "odikit/image.hpp"

namespace odikit::dmod {

/// Planar C x H x W tensor of doubles (feature maps, condition maps, offset
/// fields). Unlike ImageGrid, values are unrestricted.
struct Tensor3 {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Tensor3() = default;
    Tensor3(int c, int h, int w, double fill = 0.0)
        : channels(c), height(h), width(w),
          data(static_cast<size_t>(c) * h * w, fill) {}

    double& at(int c, int r, int col) {
        return data[(static_cast<size_t>(c) * height + r) * width + col];
    }
    double at(int c, int r, int col) const {
        return data[(static_cast<size_t>(c) * height + r) * width + col];
    }
    bool same_shape(const Tensor3& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

/// Latitude distortion map: c_d(m, .) = cos((m + 0.5 - M/2)/M * pi),
/// column-constant and in (0, 1]. Shape 1 x M x N.
Tensor3 build_cd(int rows, int cols);

/// Window position encoding: channel 0 is the row position inside each
/// window mapped linearly onto [-1, 1], channel 1 likewise for columns; the
/// pattern tiles every `window` pixels. Throws IndivisibleWindow unless
/// window divides both dimensions.
Tensor3 build_cw(int height, int width, int window);

struct ConditionMaps {
    Tensor3 c_d;  // 1 x H x W
    Tensor3 c_w;  // 2 x H x W
};

ConditionMaps build_condition_maps(int height, int width, int window);

/// Pointwise (1x1) three-stage network: in -> hidden -> hidden -> out with
/// ReLU between stages. Weight layout is [out][in], row-major.
struct OffsetNetWeights {
    int in_channels = 0;
    int hidden = 0;
    int out_channels = 0;
    std::vector<float> w1, b1;  // hidden x in, hidden
    std::vector<float> w2, b2;  // hidden x hidden, hidden
    std::vector<float> w3, b3;  // out x hidden, out
};

/// Evaluates the offset network over every pixel of the stacked condition
/// channels. Output shape: out_channels x H x W. Offset channels come in
/// (dy, dx) pairs, row displacement first.
Tensor3 offset_net_forward(const Tensor3& cond, const OffsetNetWeights& net);

/// Window self-attention projections; layout [in][out] so tokens multiply
/// from the left (q = f W_q).
struct AttentionWeights {
    int channels = 0;
    std::vector<float> wq, wk, wv;  // C x C each
};

/// 3x3 convolution bank: filter layout [out][in][tap], taps row-major over
/// the kernel.
struct ConvWeights {
    int out_channels = 0;
    int in_channels = 0;
    std::vector<float> filter;  // out x in x 9
    std::vector<float> bias;    // out
};

/// Everything one deformable attention + deformable convolution pair needs.
struct BlockWeights {
    int channels = 0;
    int heads = 1;
    int window = 2;
    int hidden = 32;
    OffsetNetWeights daab_offset;  // 3 -> 2
    AttentionWeights attn;
    OffsetNetWeights dacb_offset;  // 1 -> 18
    ConvWeights conv;
};

/// Small random weights for demos and tests; fully determined by the seed.
BlockWeights random_block_weights(int channels, int heads, int window, int hidden,
                                  uint64_t seed);

struct BlockResult {
    Tensor3 output;
    Tensor3 offsets;  // the field actually used; depends only on conditions
};

/// Deformable window self-attention: offsets from the condition maps warp
/// the feature map; queries come from the unwarped features, keys and values
/// from the warped ones; one shared offset field across all heads. Feature
/// sampling uses bilinear interpolation with a zero border.
BlockResult daab_forward(const Tensor3& features, const ConditionMaps& cond,
                         const BlockWeights& weights);

/// Deformable 3x3 convolution (offsets only, no modulation mask) whose
/// offsets are computed from the latitude map alone. Zero padding for both
/// tap positions and bilinear sampling.
BlockResult dacb_forward(const Tensor3& features, const Tensor3& c_d,
                         const BlockWeights& weights);

/// Renders reference points (channel 1) and displaced points (channel 0) of
/// an offset field on an H x W raster, subsampled by stride; channel 2 holds
/// the mean per-tap displacement magnitude of each sampled point, clamped to
/// unit range.
ImageGrid offsets_heatmap(const Tensor3& field, int stride);

}  // namespace odikit::dmod
