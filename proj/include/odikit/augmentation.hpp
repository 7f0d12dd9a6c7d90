#pragma once

#include <array>
#include <string>
#include <vector>

#include "odikit/image.hpp"
#include "odikit/warp.hpp"

namespace odikit::augment {

/// Configuration of the pseudo-ERP synthesis. Plain images are split into
/// three horizontal sub-images (latitude anchors -30/0/+30 degrees), sampled
/// with square sliding windows, treated as 90-degree-FOV perspectives placed
/// at Phi_p = phi_h + z0 with z0 cycling through {-15, 0, +15} degrees, and
/// projected onto an ERP canvas; the black border is cut away by the maximal
/// inscribed rectangle and small patches are discarded.
struct AugmentConfig {
    double fov = geom::kPi / 2.0;
    std::array<int, 3> phi_h_deg = {-30, 0, 30};  // per sub-image, left to right
    std::array<int, 3> z0_deg = {-15, 0, 15};     // cycled per window, in order
    int window = 0;  // sliding-window side in source pixels; 0: sub-image width
    int stride = 0;  // window stride in source pixels; 0: equal to the window
    int min_patch = 256;
    int erp_canvas_height = 1024;
    int threads = 1;

    void validate() const;
};

/// One emitted patch, as recorded in the manifest.
struct PatchRecord {
    std::string source;   // source image id (file stem)
    int sub_image = 0;    // 0..2, left to right
    int window_row = 0;   // window origin in sub-image pixels
    int window_col = 0;
    int phi_p_deg = 0;    // phi_h + z0, exact integer degrees
    int width = 0;        // output patch dimensions
    int height = 0;
    std::string file;     // output file name
};

/// Splits an image into three horizontal sub-images of equal width, the
/// remainder columns going to the last. Throws TooSmall below width 3.
std::array<ImageGrid, 3> split_three(const ImageGrid& img);

/// Projects a patch, treated as a perspective with camera (theta 0, phi_p)
/// and the configured fov, onto a full ERP canvas. The mask is true exactly
/// where the inverse map lands inside the perspective frustum. Throws
/// PoleOverlap when |phi_p| + fov/2 exceeds pi/2.
WarpResult perspective_patch_to_erp(const ImageGrid& patch, double phi_p,
                                    const AugmentConfig& cfg);

/// Largest-area axis-aligned all-true rectangle; ties broken by topmost row,
/// then leftmost column. Throws EmptyMask when no pixel is true.
struct Rect {
    int row = 0;
    int col = 0;
    int height = 0;
    int width = 0;
};
Rect find_max_true_rect(const ValidityMask& mask);

/// Crops img to find_max_true_rect(mask). Shapes must agree.
ImageGrid crop_black_border(const ImageGrid& img, const ValidityMask& mask);

/// Runs the full synthesis over every readable PNG/JPEG in source_dir,
/// writing patch PNGs and a manifest.json into out_dir. Unreadable files are
/// skipped with a note on stderr. Returns the ordered records.
std::vector<PatchRecord> synthesize_dataset(const std::string& source_dir,
                                            const AugmentConfig& cfg,
                                            const std::string& out_dir);

/// Serializes records the way manifest.json stores them (stable field and
/// record order, so reruns are byte-identical).
std::string manifest_to_json(const std::vector<PatchRecord>& records);

}  // namespace odikit::augment
