#include "odikit/augmentation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "odikit/parallel.hpp"
#include "odikit/raster_io.hpp"
#include "odikit/sampling.hpp"

namespace odikit::augment {

namespace fs = std::filesystem;
using geom::ProjectionSpec;

void AugmentConfig::validate() const {
    if (!(fov > 0.0 && fov < geom::kPi)) throw ConfigError("fov out of (0, pi)");
    if (min_patch < 1) throw ConfigError("min_patch must be >= 1");
    if (window < 0 || stride < 0) throw ConfigError("window/stride must be nonnegative");
    if (erp_canvas_height < 2) throw ConfigError("canvas height too small");
}

std::array<ImageGrid, 3> split_three(const ImageGrid& img) {
    if (img.width < 3) throw TooSmall("need width >= 3 to split into three sub-images");
    const int base = img.width / 3;
    const int w2 = img.width - 2 * base;  // remainder columns go to the last
    return {crop(img, 0, 0, img.height, base), crop(img, 0, base, img.height, base),
            crop(img, 0, 2 * base, img.height, w2)};
}

namespace {

struct ProjectedBox {
    ImageGrid image;
    ValidityMask mask;
    int row0 = 0;
    int col0 = 0;
};

// Projects the patch onto the ERP canvas, evaluating only the bounding box
// of rows/columns the frustum can reach; everything outside is black and
// mask-false by construction.
ProjectedBox project_patch_box(const ImageGrid& patch, double phi_p, const AugmentConfig& cfg) {
    if (patch.height == 0 || patch.width == 0) throw TooSmall("empty patch");
    if (std::fabs(phi_p) + cfg.fov / 2.0 > geom::kPi / 2.0 + 1e-12)
        throw PoleOverlap("patch placement reaches past a pole");

    const int canvas_h = cfg.erp_canvas_height;
    const int canvas_w = 2 * canvas_h;
    const ProjectionSpec erp_spec = ProjectionSpec::erp(canvas_h, canvas_w);
    const ProjectionSpec pers_spec =
        ProjectionSpec::perspective(patch.height, patch.width, cfg.fov, 0.0, phi_p);

    // Latitudes reach phi_p +- fov/2, longitudes +- fov/2 around zero.
    const double half = cfg.fov / 2.0;
    const auto row_at = [&](double phi) {
        return (geom::kPi / 2.0 - phi) / geom::kPi * canvas_h - 0.5;
    };
    const auto col_at = [&](double theta) {
        return (theta + geom::kPi) / (2.0 * geom::kPi) * canvas_w - 0.5;
    };
    const int r0 = std::clamp(static_cast<int>(std::floor(row_at(phi_p + half))) - 1, 0, canvas_h - 1);
    const int r1 = std::clamp(static_cast<int>(std::ceil(row_at(phi_p - half))) + 1, 0, canvas_h - 1);
    const int c0 = std::clamp(static_cast<int>(std::floor(col_at(-half))) - 1, 0, canvas_w - 1);
    const int c1 = std::clamp(static_cast<int>(std::ceil(col_at(half))) + 1, 0, canvas_w - 1);

    ProjectedBox box;
    box.row0 = r0;
    box.col0 = c0;
    box.image = ImageGrid(r1 - r0 + 1, c1 - c0 + 1, patch.channels);
    box.mask = ValidityMask(r1 - r0 + 1, c1 - c0 + 1, false);

    std::vector<double> px(patch.channels);
    for (int r = 0; r < box.image.height; ++r) {
        for (int c = 0; c < box.image.width; ++c) {
            const geom::PlaneCoord dp = geom::plane_from_pixel(erp_spec, r0 + r, c0 + c);
            const geom::SphericalCoord s = geom::sphere_from_erp(dp);
            const geom::Projected pr = geom::perspective_from_sphere(s, pers_spec);
            if (!pr.ok()) continue;
            const geom::PixelCoord pc = geom::pixel_from_plane(pers_spec, pr.point);
            bicubic_sample(patch, pc.col, pc.row, OobPolicy::ClampEdge, px);
            double* dst = box.image.pixel(r, c);
            for (int ch = 0; ch < patch.channels; ++ch) dst[ch] = px[ch];
            box.mask.set(r, c, true);
        }
    }
    return box;
}

}  // namespace

WarpResult perspective_patch_to_erp(const ImageGrid& patch, double phi_p,
                                    const AugmentConfig& cfg) {
    cfg.validate();
    ProjectedBox box = project_patch_box(patch, phi_p, cfg);
    WarpResult out;
    out.image = ImageGrid(cfg.erp_canvas_height, 2 * cfg.erp_canvas_height, patch.channels);
    out.mask = ValidityMask(cfg.erp_canvas_height, 2 * cfg.erp_canvas_height, false);
    for (int r = 0; r < box.image.height; ++r) {
        std::copy_n(box.image.pixel(r, 0), static_cast<size_t>(box.image.width) * patch.channels,
                    out.image.pixel(box.row0 + r, box.col0));
        for (int c = 0; c < box.image.width; ++c)
            out.mask.set(box.row0 + r, box.col0 + c, box.mask.at(r, c));
    }
    return out;
}

Rect find_max_true_rect(const ValidityMask& mask) {
    if (mask.count_true() == 0) throw EmptyMask("mask has no true pixel");

    // Histogram-of-heights sweep: every maximal all-true rectangle surfaces
    // as a stack pop (or final flush) at its bottom row.
    Rect best{0, 0, 0, 0};
    long best_area = 0;
    std::vector<int> heights(mask.width, 0);
    std::vector<int> stack;
    const auto consider = [&](int bottom, int left, int width, int height) {
        const long area = static_cast<long>(width) * height;
        const int top = bottom - height + 1;
        if (area > best_area ||
            (area == best_area && (top < best.row || (top == best.row && left < best.col)))) {
            best_area = area;
            best = {top, left, height, width};
        }
    };

    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) heights[c] = mask.at(r, c) ? heights[c] + 1 : 0;
        stack.clear();
        for (int c = 0; c <= mask.width; ++c) {
            const int h = c < mask.width ? heights[c] : 0;
            while (!stack.empty() && heights[stack.back()] >= h) {
                const int tall = heights[stack.back()];
                stack.pop_back();
                const int left = stack.empty() ? 0 : stack.back() + 1;
                if (tall > 0) consider(r, left, c - left, tall);
            }
            stack.push_back(c);
        }
    }
    return best;
}

ImageGrid crop_black_border(const ImageGrid& img, const ValidityMask& mask) {
    if (img.height != mask.height || img.width != mask.width)
        throw ShapeMismatch("mask shape does not match raster");
    const Rect r = find_max_true_rect(mask);
    return crop(img, r.row, r.col, r.height, r.width);
}

std::string manifest_to_json(const std::vector<PatchRecord>& records) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& rec : records) {
        arr.push_back({{"source", rec.source},
                       {"sub_image", rec.sub_image},
                       {"window_origin", {rec.window_row, rec.window_col}},
                       {"phi_p_deg", rec.phi_p_deg},
                       {"width", rec.width},
                       {"height", rec.height},
                       {"file", rec.file}});
    }
    return arr.dump(2) + "\n";
}

std::vector<PatchRecord> synthesize_dataset(const std::string& source_dir,
                                            const AugmentConfig& cfg,
                                            const std::string& out_dir) {
    cfg.validate();
    if (!fs::is_directory(source_dir)) throw IoError("not a directory: " + source_dir);
    fs::create_directories(out_dir);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::vector<PatchRecord>> per_file(files.size());
    parallel_for(static_cast<int>(files.size()), cfg.threads, [&](int fi) {
        const fs::path& path = files[fi];
        ImageGrid img;
        try {
            img = io::read_image(path.string());
        } catch (const Error& e) {
            std::cerr << "skipping " << path.string() << ": " << e.what() << "\n";
            return;
        }
        const std::string stem = path.stem().string();
        std::array<ImageGrid, 3> subs;
        try {
            subs = split_three(img);
        } catch (const Error& e) {
            std::cerr << "skipping " << path.string() << ": " << e.what() << "\n";
            return;
        }
        for (int s = 0; s < 3; ++s) {
            const ImageGrid& sub = subs[s];
            const int win = cfg.window > 0 ? cfg.window : sub.width;
            const int stride = cfg.stride > 0 ? cfg.stride : win;
            int widx = 0;
            for (int wr = 0; wr + win <= sub.height; wr += stride) {
                for (int wc = 0; wc + win <= sub.width; wc += stride, ++widx) {
                    const int z0 = cfg.z0_deg[widx % 3];
                    const int phi_p_deg = cfg.phi_h_deg[s] + z0;
                    const ImageGrid window_img = crop(sub, wr, wc, win, win);
                    ProjectedBox box =
                        project_patch_box(window_img, geom::deg_to_rad(phi_p_deg), cfg);
                    const Rect rect = find_max_true_rect(box.mask);
                    if (std::min(rect.height, rect.width) < cfg.min_patch) continue;
                    const ImageGrid patch = crop(box.image, rect.row, rect.col, rect.height, rect.width);

                    char name[256];
                    std::snprintf(name, sizeof(name), "%s_s%d_w%03d.png", stem.c_str(), s, widx);
                    try {
                        io::write_png((fs::path(out_dir) / name).string(), patch, 8);
                    } catch (const Error& e) {
                        std::cerr << "skipping patch " << name << ": " << e.what() << "\n";
                        continue;
                    }
                    per_file[fi].push_back(PatchRecord{stem, s, wr, wc, phi_p_deg, patch.width,
                                                       patch.height, name});
                }
            }
        }
    });

    std::vector<PatchRecord> records;
    for (auto& chunk : per_file)
        records.insert(records.end(), chunk.begin(), chunk.end());

    std::ofstream manifest(fs::path(out_dir) / "manifest.json", std::ios::trunc);
    if (!manifest) throw IoError("cannot write manifest.json");
    manifest << manifest_to_json(records);
    if (!manifest) throw IoError("manifest write failed");
    return records;
}

}  // namespace odikit::augment
