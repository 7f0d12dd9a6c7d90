#pragma once

#include <string>

#include "odikit/distortion_blocks.hpp"

namespace odikit::dmod {

/// Writes the bundle as a flat little-endian float32 binary plus a JSON
/// sidecar (same path with ".json" appended) describing tensor names,
/// shapes, and byte offsets. Round trips are bit-exact.
void save_block_weights(const std::string& bin_path, const BlockWeights& weights);

/// Loads a bundle written by save_block_weights. Throws IoError on missing
/// or malformed files.
BlockWeights load_block_weights(const std::string& bin_path);

/// Sidecar path convention: "<bin_path>.json".
std::string weights_sidecar_path(const std::string& bin_path);

}  // namespace odikit::dmod
