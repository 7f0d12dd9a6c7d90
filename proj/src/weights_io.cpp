#include "odikit/weights_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace odikit::dmod {

namespace {

using nlohmann::ordered_json;

struct TensorRef {
    std::string name;
    std::vector<int> shape;
    std::vector<float>* data;
};

// Fixed serialization order; loaders match tensors by name, not position.
std::vector<TensorRef> tensor_table(BlockWeights& w) {
    return {
        {"daab.offset.stage1.weight", {w.hidden, 3}, &w.daab_offset.w1},
        {"daab.offset.stage1.bias", {w.hidden}, &w.daab_offset.b1},
        {"daab.offset.stage2.weight", {w.hidden, w.hidden}, &w.daab_offset.w2},
        {"daab.offset.stage2.bias", {w.hidden}, &w.daab_offset.b2},
        {"daab.offset.stage3.weight", {2, w.hidden}, &w.daab_offset.w3},
        {"daab.offset.stage3.bias", {2}, &w.daab_offset.b3},
        {"daab.attn.wq", {w.channels, w.channels}, &w.attn.wq},
        {"daab.attn.wk", {w.channels, w.channels}, &w.attn.wk},
        {"daab.attn.wv", {w.channels, w.channels}, &w.attn.wv},
        {"dacb.offset.stage1.weight", {w.hidden, 1}, &w.dacb_offset.w1},
        {"dacb.offset.stage1.bias", {w.hidden}, &w.dacb_offset.b1},
        {"dacb.offset.stage2.weight", {w.hidden, w.hidden}, &w.dacb_offset.w2},
        {"dacb.offset.stage2.bias", {w.hidden}, &w.dacb_offset.b2},
        {"dacb.offset.stage3.weight", {18, w.hidden}, &w.dacb_offset.w3},
        {"dacb.offset.stage3.bias", {18}, &w.dacb_offset.b3},
        {"dacb.conv.weight", {w.conv.out_channels, w.conv.in_channels, 3, 3}, &w.conv.filter},
        {"dacb.conv.bias", {w.conv.out_channels}, &w.conv.bias},
    };
}

size_t shape_elems(const std::vector<int>& shape) {
    size_t n = 1;
    for (int d : shape) n *= static_cast<size_t>(d);
    return n;
}

void write_le_floats(std::ofstream& out, const std::vector<float>& v) {
    static_assert(std::endian::native == std::endian::little,
                  "float byte swap for big-endian hosts not implemented");
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(float)));
}

}  // namespace

std::string weights_sidecar_path(const std::string& bin_path) { return bin_path + ".json"; }

void save_block_weights(const std::string& bin_path, const BlockWeights& weights) {
    BlockWeights w = weights;  // tensor_table needs mutable access
    const auto table = tensor_table(w);

    ordered_json sidecar;
    sidecar["format"] = "odikit-weights-v1";
    sidecar["dtype"] = "float32-le";
    sidecar["config"] = {{"channels", w.channels},
                         {"heads", w.heads},
                         {"window", w.window},
                         {"hidden", w.hidden},
                         {"conv_out", w.conv.out_channels}};
    ordered_json tensors = ordered_json::array();

    std::ofstream bin(bin_path, std::ios::binary | std::ios::trunc);
    if (!bin) throw IoError("cannot open " + bin_path + " for writing");
    size_t offset = 0;
    for (const auto& t : table) {
        if (t.data->size() != shape_elems(t.shape))
            throw ConfigError("tensor " + t.name + " does not match its declared shape");
        tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"byte_offset", offset}});
        write_le_floats(bin, *t.data);
        offset += t.data->size() * sizeof(float);
    }
    sidecar["tensors"] = std::move(tensors);
    bin.close();
    if (!bin) throw IoError("write failed: " + bin_path);

    std::ofstream js(weights_sidecar_path(bin_path), std::ios::trunc);
    if (!js) throw IoError("cannot open sidecar for writing");
    js << sidecar.dump(2) << "\n";
    if (!js) throw IoError("write failed: " + weights_sidecar_path(bin_path));
}

BlockWeights load_block_weights(const std::string& bin_path) {
    std::ifstream js(weights_sidecar_path(bin_path));
    if (!js) throw IoError("missing weights sidecar: " + weights_sidecar_path(bin_path));
    ordered_json sidecar;
    try {
        js >> sidecar;
    } catch (const std::exception& e) {
        throw IoError(std::string("malformed weights sidecar: ") + e.what());
    }
    if (sidecar.value("format", "") != "odikit-weights-v1")
        throw IoError("unsupported weights format");

    BlockWeights w;
    const auto& cfg = sidecar.at("config");
    w.channels = cfg.at("channels").get<int>();
    w.heads = cfg.at("heads").get<int>();
    w.window = cfg.at("window").get<int>();
    w.hidden = cfg.at("hidden").get<int>();
    w.daab_offset.in_channels = 3;
    w.daab_offset.hidden = w.hidden;
    w.daab_offset.out_channels = 2;
    w.dacb_offset.in_channels = 1;
    w.dacb_offset.hidden = w.hidden;
    w.dacb_offset.out_channels = 18;
    w.attn.channels = w.channels;
    w.conv.out_channels = cfg.at("conv_out").get<int>();
    w.conv.in_channels = w.channels;

    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw IoError("missing weights binary: " + bin_path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());

    auto table = tensor_table(w);
    for (const auto& entry : sidecar.at("tensors")) {
        const std::string name = entry.at("name").get<std::string>();
        const size_t byte_offset = entry.at("byte_offset").get<size_t>();
        const auto shape = entry.at("shape").get<std::vector<int>>();
        auto it = std::find_if(table.begin(), table.end(),
                               [&](const TensorRef& t) { return t.name == name; });
        if (it == table.end()) throw IoError("unknown tensor in sidecar: " + name);
        const size_t n = shape_elems(shape);
        if (n != shape_elems(it->shape)) throw IoError("unexpected shape for tensor " + name);
        if (byte_offset + n * sizeof(float) > bytes.size())
            throw IoError("weights binary truncated at tensor " + name);
        it->data->resize(n);
        std::memcpy(it->data->data(), bytes.data() + byte_offset, n * sizeof(float));
    }
    for (const auto& t : table) {
        if (t.data->size() != shape_elems(t.shape))
            throw IoError("sidecar is missing tensor " + t.name);
    }
    return w;
}

}  // namespace odikit::dmod
