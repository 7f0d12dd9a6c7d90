#include "odikit/image.hpp"

#include <algorithm>
#include <numeric>

namespace odikit {

ImageGrid::ImageGrid(int h, int w, int c, double fill)
    : height(h), width(w), channels(c) {
    if (h < 0 || w < 0 || c < 0) throw ConfigError("negative raster dimensions");
    data.assign(static_cast<size_t>(h) * w * c, fill);
}

ValidityMask::ValidityMask(int h, int w, bool fill) : height(h), width(w) {
    if (h < 0 || w < 0) throw ConfigError("negative mask dimensions");
    data.assign(static_cast<size_t>(h) * w, fill ? 1 : 0);
}

size_t ValidityMask::count_true() const {
    return static_cast<size_t>(std::count_if(data.begin(), data.end(), [](uint8_t v) { return v != 0; }));
}

ImageGrid flip_vertical(const ImageGrid& img) {
    ImageGrid out(img.height, img.width, img.channels);
    const size_t row_len = static_cast<size_t>(img.width) * img.channels;
    for (int r = 0; r < img.height; ++r) {
        std::copy_n(img.data.data() + static_cast<size_t>(img.height - 1 - r) * row_len, row_len,
                    out.data.data() + static_cast<size_t>(r) * row_len);
    }
    return out;
}

ImageGrid channel_mean(const ImageGrid& img) {
    if (img.channels == 1) return img;
    ImageGrid out(img.height, img.width, 1);
    const size_t pixels = static_cast<size_t>(img.height) * img.width;
    for (size_t i = 0; i < pixels; ++i) {
        const double* p = img.data.data() + i * img.channels;
        out.data[i] = std::accumulate(p, p + img.channels, 0.0) / img.channels;
    }
    return out;
}

ImageGrid extract_channel(const ImageGrid& img, int ch) {
    if (ch < 0 || ch >= img.channels) throw ConfigError("channel index out of range");
    ImageGrid out(img.height, img.width, 1);
    const size_t pixels = static_cast<size_t>(img.height) * img.width;
    for (size_t i = 0; i < pixels; ++i) out.data[i] = img.data[i * img.channels + ch];
    return out;
}

ImageGrid crop(const ImageGrid& img, int row0, int col0, int h, int w) {
    if (row0 < 0 || col0 < 0 || h < 0 || w < 0 || row0 + h > img.height || col0 + w > img.width)
        throw ConfigError("crop region out of bounds");
    ImageGrid out(h, w, img.channels);
    const size_t row_len = static_cast<size_t>(w) * img.channels;
    for (int r = 0; r < h; ++r) {
        std::copy_n(img.pixel(row0 + r, col0), row_len, out.data.data() + static_cast<size_t>(r) * row_len);
    }
    return out;
}

}  // namespace odikit
