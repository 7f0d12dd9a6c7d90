#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "odikit/augmentation.hpp"
#include "odikit/degradation.hpp"
#include "odikit/distortion_blocks.hpp"
#include "odikit/metrics.hpp"
#include "odikit/parallel.hpp"
#include "odikit/raster_io.hpp"
#include "odikit/resize.hpp"
#include "odikit/warp.hpp"
#include "odikit/weights_io.hpp"

namespace fs = std::filesystem;
using namespace odikit;
using nlohmann::ordered_json;

namespace {

// Exit codes: 0 success, 1 domain/validation error, 2 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

struct GlobalOpts {
    int threads = default_thread_count();
    bool overwrite = false;
    bool deep = false;  // 16-bit PNG output
};

void check_output_path(const std::string& path, const GlobalOpts& g) {
    if (!g.overwrite && fs::exists(path))
        throw IoError("refusing to overwrite " + path + " (use --overwrite)");
}

void write_output(const std::string& path, const ImageGrid& img, const GlobalOpts& g) {
    check_output_path(path, g);
    io::write_png(path, img, g.deep ? 16 : 8);
}

geom::ProjectionSpec make_spec(const std::string& kind, int height, int width, double fov_deg,
                               double aperture_deg, double theta_deg, double phi_deg) {
    if (kind == "erp") return geom::ProjectionSpec::erp(height, width);
    if (kind == "fisheye")
        return geom::ProjectionSpec::fisheye(height, geom::deg_to_rad(aperture_deg),
                                             geom::deg_to_rad(theta_deg),
                                             geom::deg_to_rad(phi_deg));
    if (kind == "perspective")
        return geom::ProjectionSpec::perspective(height, width, geom::deg_to_rad(fov_deg),
                                                 geom::deg_to_rad(theta_deg),
                                                 geom::deg_to_rad(phi_deg));
    throw ConfigError("unknown projection kind: " + kind);
}

// --- downsample ---

struct DownsampleOpts {
    std::string mode = "fisheye";
    int scale = 2;
    double pad_aperture_deg = 200.0;
    int disk = 0;
    std::string input, output;
};

int cmd_downsample(const DownsampleOpts& o, const GlobalOpts& g) {
    const ImageGrid hr = io::read_image(o.input);
    if (hr.width != 2 * hr.height)
        throw ConfigError("input is not an ERP raster (width must be 2*height)");
    if (o.scale < 1 || hr.height % o.scale != 0)
        throw ConfigError("scale must divide the ERP height");

    ImageGrid lr;
    if (o.mode == "erp") {
        lr = erp_downsample(hr, o.scale);
    } else if (o.mode == "fisheye") {
        DegradationConfig cfg;
        cfg.scale = o.scale;
        cfg.pad_aperture = geom::deg_to_rad(o.pad_aperture_deg);
        cfg.disk_diameter = o.disk;
        cfg.threads = g.threads;
        lr = fisheye_downsample(hr, cfg);
    } else {
        throw ConfigError("mode must be erp or fisheye");
    }
    write_output(o.output, lr, g);
    return kExitOk;
}

// --- project ---

struct ProjectOpts {
    std::string from = "erp", to = "perspective";
    double fov_deg = 90.0, aperture_deg = 180.0;
    double theta_deg = 0.0, phi_deg = 0.0;
    double src_fov_deg = 90.0, src_aperture_deg = 180.0;
    double src_theta_deg = 0.0, src_phi_deg = 0.0;
    int width = 0, height = 0;
    std::string kernel = "bicubic", oob;
    std::string input, output, mask_output;
};

int cmd_project(const ProjectOpts& o, const GlobalOpts& g) {
    const ImageGrid src = io::read_image(o.input);
    const auto src_spec = make_spec(o.from, src.height, src.width, o.src_fov_deg,
                                    o.src_aperture_deg, o.src_theta_deg, o.src_phi_deg);

    int out_h = o.height, out_w = o.width;
    if (out_h == 0) out_h = src.height;
    if (out_w == 0) out_w = o.to == "erp" ? 2 * out_h : out_h;
    const auto dst_spec =
        make_spec(o.to, out_h, out_w, o.fov_deg, o.aperture_deg, o.theta_deg, o.phi_deg);

    SampleSpec sample;
    if (o.kernel == "bilinear")
        sample.kernel = SampleKernel::Bilinear;
    else if (o.kernel == "bicubic")
        sample.kernel = SampleKernel::Bicubic;
    else
        throw ConfigError("kernel must be bilinear or bicubic");
    std::string oob = o.oob;
    if (oob.empty()) oob = o.from == "erp" ? "wrap" : "zero";
    if (oob == "zero")
        sample.out_of_bounds = OobPolicy::Zero;
    else if (oob == "clamp")
        sample.out_of_bounds = OobPolicy::ClampEdge;
    else if (oob == "wrap")
        sample.out_of_bounds = OobPolicy::WrapLongitude;
    else
        throw ConfigError("oob must be zero, clamp, or wrap");

    const WarpResult out = warp(src, src_spec, dst_spec, sample, g.threads);
    write_output(o.output, out.image, g);
    if (!o.mask_output.empty()) {
        ImageGrid mask_img(out.mask.height, out.mask.width, 1);
        for (int r = 0; r < mask_img.height; ++r)
            for (int c = 0; c < mask_img.width; ++c)
                mask_img.at(r, c, 0) = out.mask.at(r, c) ? 1.0 : 0.0;
        write_output(o.mask_output, mask_img, g);
    }
    return kExitOk;
}

// --- augment ---

struct AugmentOpts {
    std::string src, out;
    double fov_deg = 90.0;
    int min_patch = 256;
    int canvas_height = 1024;
    int window = 0, stride = 0;
    uint64_t seed = 0;  // reserved; the pipeline is deterministic
};

int cmd_augment(const AugmentOpts& o, const GlobalOpts& g) {
    augment::AugmentConfig cfg;
    cfg.fov = geom::deg_to_rad(o.fov_deg);
    cfg.min_patch = o.min_patch;
    cfg.erp_canvas_height = o.canvas_height;
    cfg.window = o.window;
    cfg.stride = o.stride;
    cfg.threads = g.threads;

    size_t inputs = 0;
    for (const auto& entry : fs::directory_iterator(o.src))
        if (entry.is_regular_file()) ++inputs;
    const auto records = augment::synthesize_dataset(o.src, cfg, o.out);
    std::cout << records.size() << " patches -> " << o.out << "\n";
    if (inputs > 0 && records.empty()) {
        std::cerr << "no patches produced from " << inputs << " input files\n";
        return kExitDomain;
    }
    return kExitOk;
}

// --- metric ---

struct MetricOpts {
    std::string reference, candidate;
    std::string pairs_file, report_file;
    bool per_channel = false;
};

ordered_json metric_pair(const std::string& ref_path, const std::string& cand_path,
                         bool per_channel) {
    const ImageGrid ref = io::read_image(ref_path);
    const ImageGrid cand = io::read_image(cand_path);
    if (ref.height != cand.height || ref.width != cand.width || ref.channels != cand.channels)
        throw ShapeMismatch("shape mismatch: " + ref_path + " vs " + cand_path);

    const metrics::WeightMap w = metrics::erp_weights(ref.height, ref.width);
    double p = 0.0, s = 0.0, wp = 0.0, ws = 0.0;
    if (per_channel && ref.channels > 1) {
        for (int ch = 0; ch < ref.channels; ++ch) {
            const ImageGrid a = extract_channel(ref, ch);
            const ImageGrid b = extract_channel(cand, ch);
            p += metrics::psnr(a, b);
            s += metrics::ssim(a, b);
            wp += metrics::ws_psnr(a, b, w);
            ws += metrics::ws_ssim(a, b, w);
        }
        p /= ref.channels;
        s /= ref.channels;
        wp /= ref.channels;
        ws /= ref.channels;
    } else {
        p = metrics::psnr(ref, cand);
        s = metrics::ssim(ref, cand);
        wp = metrics::ws_psnr(ref, cand, w);
        ws = metrics::ws_ssim(ref, cand, w);
    }
    return {{"reference", ref_path}, {"candidate", cand_path},
            {"psnr", p},            {"ssim", s},
            {"ws_psnr", wp},        {"ws_ssim", ws}};
}

int cmd_metric(const MetricOpts& o, const GlobalOpts& g) {
    std::vector<std::pair<std::string, std::string>> pairs;
    if (!o.pairs_file.empty()) {
        std::ifstream in(o.pairs_file);
        if (!in) throw IoError("cannot open " + o.pairs_file);
        ordered_json list;
        try {
            in >> list;
        } catch (const std::exception& e) {
            throw IoError(std::string("malformed pairs file: ") + e.what());
        }
        for (const auto& item : list)
            pairs.emplace_back(item.at(0).get<std::string>(), item.at(1).get<std::string>());
    } else {
        pairs.emplace_back(o.reference, o.candidate);
    }

    std::vector<ordered_json> results(pairs.size());
    std::exception_ptr failure;
    parallel_for(static_cast<int>(pairs.size()), g.threads, [&](int i) {
        try {
            results[i] = metric_pair(pairs[i].first, pairs[i].second, o.per_channel);
        } catch (...) {
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    ordered_json report;
    report["pairs"] = ordered_json::array();
    double mp = 0.0, ms = 0.0, mwp = 0.0, mws = 0.0;
    for (const auto& r : results) {
        mp += r.at("psnr").get<double>();
        ms += r.at("ssim").get<double>();
        mwp += r.at("ws_psnr").get<double>();
        mws += r.at("ws_ssim").get<double>();
        report["pairs"].push_back(r);
    }
    const double n = static_cast<double>(results.size());
    report["means"] = {
        {"psnr", mp / n}, {"ssim", ms / n}, {"ws_psnr", mwp / n}, {"ws_ssim", mws / n}};

    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!o.report_file.empty()) {
        check_output_path(o.report_file, g);
        std::ofstream out(o.report_file, std::ios::trunc);
        out << text;
        if (!out) throw IoError("cannot write " + o.report_file);
    }
    return kExitOk;
}

// --- condmap ---

struct CondmapOpts {
    int height = 64, width = 128;
    std::string output;
};

int cmd_condmap(const CondmapOpts& o, const GlobalOpts& g) {
    const dmod::Tensor3 cd = dmod::build_cd(o.height, o.width);
    ImageGrid img(o.height, o.width, 1);
    for (int r = 0; r < o.height; ++r)
        for (int c = 0; c < o.width; ++c) img.at(r, c, 0) = cd.at(0, r, c);
    write_output(o.output, img, g);
    return kExitOk;
}

// --- offsets-viz ---

struct OffsetsVizOpts {
    std::string weights, block = "daab";
    int rows = 64, cols = 64, stride = 4;
    std::string output;
};

int cmd_offsets_viz(const OffsetsVizOpts& o, const GlobalOpts& g) {
    const dmod::BlockWeights w = dmod::load_block_weights(o.weights);
    dmod::Tensor3 field;
    if (o.block == "daab") {
        if (o.rows % w.window != 0 || o.cols % w.window != 0)
            throw ConfigError("rows/cols must be divisible by the bundle's window");
        const dmod::ConditionMaps cond = dmod::build_condition_maps(o.rows, o.cols, w.window);
        dmod::Tensor3 stacked(3, o.rows, o.cols);
        for (int m = 0; m < o.rows; ++m)
            for (int n = 0; n < o.cols; ++n) {
                stacked.at(0, m, n) = cond.c_d.at(0, m, n);
                stacked.at(1, m, n) = cond.c_w.at(0, m, n);
                stacked.at(2, m, n) = cond.c_w.at(1, m, n);
            }
        field = dmod::offset_net_forward(stacked, w.daab_offset);
    } else if (o.block == "dacb") {
        field = dmod::offset_net_forward(dmod::build_cd(o.rows, o.cols), w.dacb_offset);
    } else {
        throw ConfigError("block must be daab or dacb");
    }
    write_output(o.output, dmod::offsets_heatmap(field, o.stride), g);
    return kExitOk;
}

// --- gen-weights ---

struct GenWeightsOpts {
    int channels = 4, heads = 2, window = 2, hidden = 32;
    uint64_t seed = 0;
    std::string output;
};

int cmd_gen_weights(const GenWeightsOpts& o, const GlobalOpts& g) {
    check_output_path(o.output, g);
    dmod::save_block_weights(
        o.output, dmod::random_block_weights(o.channels, o.heads, o.window, o.hidden, o.seed));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"omnidirectional-image geometry, degradation, augmentation, and metric toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--threads", g.threads, "worker threads (default: ODIKIT_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--overwrite", g.overwrite, "allow overwriting existing outputs");
    app.add_flag("--deep", g.deep, "write 16-bit PNGs instead of 8-bit");

    DownsampleOpts ds;
    auto* c_ds = app.add_subcommand("downsample", "degrade an ERP image to low resolution");
    c_ds->add_option("--mode", ds.mode, "erp|fisheye (default fisheye)");
    c_ds->add_option("--scale", ds.scale, "integer downsampling factor")->required();
    c_ds->add_option("--pad-aperture", ds.pad_aperture_deg,
                     "fisheye pad aperture, degrees (default 200)");
    c_ds->add_option("--disk", ds.disk, "fisheye disk diameter in pixels (default: ERP height)");
    c_ds->add_option("input", ds.input, "HR ERP PNG/JPEG")->required();
    c_ds->add_option("output", ds.output, "LR ERP PNG")->required();

    ProjectOpts pj;
    auto* c_pj = app.add_subcommand("project", "convert a raster between projections");
    c_pj->add_option("--from", pj.from, "source projection: erp|fisheye|perspective (default erp)");
    c_pj->add_option("--to", pj.to, "target projection: erp|fisheye|perspective")->required();
    c_pj->add_option("--fov", pj.fov_deg, "target perspective FOV, degrees (default 90)");
    c_pj->add_option("--aperture", pj.aperture_deg, "target fisheye aperture, degrees (default 180)");
    c_pj->add_option("--theta", pj.theta_deg, "target view/rotation longitude, degrees");
    c_pj->add_option("--phi", pj.phi_deg, "target view/rotation latitude, degrees");
    c_pj->add_option("--src-fov", pj.src_fov_deg, "source perspective FOV, degrees");
    c_pj->add_option("--src-aperture", pj.src_aperture_deg, "source fisheye aperture, degrees");
    c_pj->add_option("--src-theta", pj.src_theta_deg, "source view/rotation longitude, degrees");
    c_pj->add_option("--src-phi", pj.src_phi_deg, "source view/rotation latitude, degrees");
    c_pj->add_option("--width", pj.width, "output width (default: derived from height)");
    c_pj->add_option("--height", pj.height, "output height (default: source height)");
    c_pj->add_option("--kernel", pj.kernel, "bilinear|bicubic (default bicubic)");
    c_pj->add_option("--oob", pj.oob, "zero|clamp|wrap (default: wrap for ERP sources, else zero)");
    c_pj->add_option("--mask", pj.mask_output, "also write the validity mask as a PNG");
    c_pj->add_option("input", pj.input, "source raster")->required();
    c_pj->add_option("output", pj.output, "output PNG")->required();

    AugmentOpts au;
    auto* c_au = app.add_subcommand("augment", "synthesize pseudo-ERP patches from plain images");
    c_au->add_option("--src", au.src, "directory of plain PNG/JPEG images")->required();
    c_au->add_option("--out", au.out, "output directory for patches + manifest.json")->required();
    c_au->add_option("--fov", au.fov_deg, "perspective FOV, degrees (default 90)");
    c_au->add_option("--min-patch", au.min_patch, "minimum output patch side (default 256)");
    c_au->add_option("--canvas-height", au.canvas_height, "working ERP height (default 1024)");
    c_au->add_option("--window", au.window, "sliding window side (default: sub-image width)");
    c_au->add_option("--stride", au.stride, "sliding window stride (default: window)");
    c_au->add_option("--seed", au.seed, "reserved; the pipeline is deterministic");

    MetricOpts me;
    auto* c_me = app.add_subcommand("metric", "PSNR/SSIM/WS-PSNR/WS-SSIM report");
    c_me->add_option("reference", me.reference, "reference raster");
    c_me->add_option("candidate", me.candidate, "candidate raster");
    c_me->add_option("--pairs", me.pairs_file, "JSON array of [reference, candidate] paths");
    c_me->add_option("--report", me.report_file, "write the JSON report here as well");
    c_me->add_flag("--per-channel", me.per_channel, "score channels separately and average");

    CondmapOpts cm;
    auto* c_cm = app.add_subcommand("condmap", "emit the latitude distortion map as a PNG");
    c_cm->add_option("--height", cm.height, "rows (default 64)");
    c_cm->add_option("--width", cm.width, "columns (default 128)");
    c_cm->add_option("output", cm.output, "output PNG")->required();

    OffsetsVizOpts ov;
    auto* c_ov = app.add_subcommand("offsets-viz", "render an offset-field heatmap from weights");
    c_ov->add_option("--weights", ov.weights, "weights binary (sidecar: <file>.json)")->required();
    c_ov->add_option("--block", ov.block, "daab|dacb (default daab)");
    c_ov->add_option("--rows", ov.rows, "field rows (default 64)");
    c_ov->add_option("--cols", ov.cols, "field columns (default 64)");
    c_ov->add_option("--stride", ov.stride, "marker subsampling stride (default 4)");
    c_ov->add_option("output", ov.output, "output PNG")->required();

    GenWeightsOpts gw;
    auto* c_gw = app.add_subcommand("gen-weights", "write a random block-weights bundle");
    c_gw->add_option("--channels", gw.channels, "feature channels (default 4)");
    c_gw->add_option("--heads", gw.heads, "attention heads (default 2)");
    c_gw->add_option("--window", gw.window, "attention window (default 2)");
    c_gw->add_option("--hidden", gw.hidden, "offset-net hidden width (default 32)");
    c_gw->add_option("--seed", gw.seed, "RNG seed (default 0)");
    c_gw->add_option("output", gw.output, "output weights binary")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitDomain;
    }

    try {
        if (c_ds->parsed()) return cmd_downsample(ds, g);
        if (c_pj->parsed()) return cmd_project(pj, g);
        if (c_au->parsed()) return cmd_augment(au, g);
        if (c_me->parsed()) {
            if (me.pairs_file.empty() && (me.reference.empty() || me.candidate.empty()))
                throw ConfigError("metric needs two rasters or --pairs");
            return cmd_metric(me, g);
        }
        if (c_cm->parsed()) return cmd_condmap(cm, g);
        if (c_ov->parsed()) return cmd_offsets_viz(ov, g);
        if (c_gw->parsed()) return cmd_gen_weights(gw, g);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitDomain;
}
