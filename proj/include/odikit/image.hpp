#pragma once

#include <cstdint>
#include <vector>

#include "odikit/errors.hpp"

namespace odikit {

/// Dense H x W x C raster of unit-interval intensities, row-major with
/// interleaved channels.
struct ImageGrid {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;

    ImageGrid() = default;
    ImageGrid(int h, int w, int c, double fill = 0.0);

    double* pixel(int row, int col) { return data.data() + (static_cast<size_t>(row) * width + col) * channels; }
    const double* pixel(int row, int col) const {
        return data.data() + (static_cast<size_t>(row) * width + col) * channels;
    }
    double& at(int row, int col, int ch) { return pixel(row, col)[ch]; }
    double at(int row, int col, int ch) const { return pixel(row, col)[ch]; }

    bool same_shape(const ImageGrid& other) const {
        return height == other.height && width == other.width && channels == other.channels;
    }
};

/// Per-pixel validity flags with the spatial shape of an ImageGrid.
struct ValidityMask {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> data;

    ValidityMask() = default;
    ValidityMask(int h, int w, bool fill = false);

    bool at(int row, int col) const { return data[static_cast<size_t>(row) * width + col] != 0; }
    void set(int row, int col, bool v) { data[static_cast<size_t>(row) * width + col] = v ? 1 : 0; }
    size_t count_true() const;
};

/// Mirrors rows top<->bottom; on an ERP raster this is the exact latitude
/// flip phi -> -phi.
ImageGrid flip_vertical(const ImageGrid& img);

/// Collapses channels to their per-pixel mean (1-channel output).
ImageGrid channel_mean(const ImageGrid& img);

/// Extracts a single channel as a 1-channel grid.
ImageGrid extract_channel(const ImageGrid& img, int ch);

/// Copies the axis-aligned region [row0, row0+h) x [col0, col0+w).
ImageGrid crop(const ImageGrid& img, int row0, int col0, int h, int w);

}  // namespace odikit
