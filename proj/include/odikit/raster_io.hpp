#pragma once

#include <string>

#include "odikit/image.hpp"

namespace odikit::io {

/// Reads a PNG or JPEG raster (sniffed by magic bytes) into unit-range
/// doubles. Gray/RGB stay as-is; an alpha channel, if present, is dropped.
/// 16-bit PNGs keep their full precision. Throws IoError on failure.
ImageGrid read_image(const std::string& path);

/// Writes a PNG; values are clamped to [0, 1] and quantized to 8 or 16 bits
/// with round-half-away rounding. channels must be 1, 3, or 4.
void write_png(const std::string& path, const ImageGrid& img, int bit_depth = 8);

}  // namespace odikit::io
