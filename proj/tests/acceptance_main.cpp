// Acceptance suite: one check per release criterion, each printed as a
// single PASS/FAIL line with its runtime. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "odikit/augmentation.hpp"
#include "odikit/degradation.hpp"
#include "odikit/distortion_blocks.hpp"
#include "odikit/metrics.hpp"
#include "odikit/raster_io.hpp"
#include "support/block_oracles.hpp"
#include "support/test_images.hpp"

using namespace odikit;
using geom::kPi;
namespace fs = std::filesystem;

namespace {

struct Harness {
    int failures = 0;

    void run(const std::string& name, const std::function<void(std::ostringstream&)>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::ostringstream detail;
        bool ok = true;
        try {
            body(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail << " threw: " << e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s (%.2f s)%s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
                    detail.str().c_str());
        if (!ok) ++failures;
    }
};

void require(bool cond, std::ostringstream& detail, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg + detail.str());
}

geom::SphereToPlane scaled_fisheye_map(const geom::ProjectionSpec& spec) {
    return [spec](const geom::SphericalCoord& s) {
        const geom::PlaneCoord p = geom::fisheye_from_sphere(s, spec).point;
        return geom::PlaneCoord{p.x * kPi / 2.0, p.y * kPi / 2.0};
    };
}

// 1. Closed-form stretching ratios vs the finite-difference Jacobian oracle:
//    1e-5 at 1000 random interior points per projection, rotated fisheye
//    included.
void criterion_jacobian(std::ostringstream& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-5;
    double worst = 0.0;

    for (int i = 0; i < 1000; ++i) {
        const auto s = geom::make_spherical((2.0 * u(rng) - 1.0) * 3.0, (2.0 * u(rng) - 1.0) * 1.5);
        const double num = geom::numeric_stretch(
            [](const geom::SphericalCoord& q) { return geom::erp_from_sphere(q); }, s, h);
        worst = std::max(worst, std::fabs(num - geom::stretch_erp({s.theta, s.phi})));
    }

    const auto pers = geom::ProjectionSpec::perspective(64, 64, kPi / 2.0);
    for (int i = 0; i < 1000; ++i) {
        const auto s =
            geom::make_spherical((2.0 * u(rng) - 1.0) * 0.7, (2.0 * u(rng) - 1.0) * 0.7);
        const auto p = geom::perspective_from_sphere(s, pers);
        const double num = geom::numeric_stretch(
            [&](const geom::SphericalCoord& q) { return geom::perspective_from_sphere(q, pers).point; },
            s, h);
        worst = std::max(worst, std::fabs(num - geom::stretch_perspective(p.point)));
    }

    for (const double rot_phi : {0.0, kPi / 6.0, kPi / 4.0}) {
        const auto fish = geom::ProjectionSpec::fisheye(64, kPi, 0.0, rot_phi);
        for (int i = 0; i < 1000; ++i) {
            const double rho = 0.05 + 0.9 * u(rng);
            const double ang = (2.0 * u(rng) - 1.0) * kPi * 0.99;
            const auto s =
                geom::sphere_from_fisheye({rho * std::cos(ang), rho * std::sin(ang)}, fish);
            const auto p = geom::fisheye_from_sphere(*s, fish);
            const double num = geom::numeric_stretch(scaled_fisheye_map(fish), *s, h);
            worst = std::max(worst, std::fabs(num - geom::stretch_fisheye(p.point, fish)));
        }
    }

    detail << " max |closed-form - oracle| = " << worst;
    require(worst < 1e-5, detail, "Jacobian identity exceeded 1e-5;");
}

// 2. K_ERP / K_Fisheye == pi/2 - |phi| to 1e-8 on a 64-point latitude grid.
void criterion_ratio_identity(std::ostringstream& detail) {
    const auto fish = geom::ProjectionSpec::fisheye(64, kPi);
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double phi = -kPi / 2.0 + (k + 0.5) / 64.0 * kPi;
        const auto p = geom::fisheye_from_sphere(geom::make_spherical(0.4, std::fabs(phi)), fish);
        const double ratio = geom::stretch_erp({0.4, phi}) / geom::stretch_fisheye(p.point, fish);
        worst = std::max(worst, std::fabs(ratio - (kPi / 2.0 - std::fabs(phi))));
        worst = std::max(worst, std::fabs(ratio - geom::stretch_erp_over_fisheye(phi)));
    }
    detail << " max deviation = " << worst;
    require(worst < 1e-8, detail, "ratio identity exceeded 1e-8;");
}

// 3. Coordinate round trips exact to 1e-10 (1e4 points per projection) and
//    the supersampled raster round trip at >= 40 dB over |phi| < 75 deg.
void criterion_round_trips(std::ostringstream& detail) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;

    for (int i = 0; i < 10000; ++i) {
        const auto s = geom::make_spherical(-kPi + 1e-6 + u(rng) * (2.0 * kPi - 2e-6),
                                            (u(rng) - 0.5) * (kPi - 1e-6));
        const auto back = geom::sphere_from_erp(geom::erp_from_sphere(s));
        worst = std::max({worst, std::fabs(back.theta - s.theta), std::fabs(back.phi - s.phi)});
    }
    const auto fish = geom::ProjectionSpec::fisheye(64, kPi, 0.2, kPi / 6.0);
    for (int i = 0; i < 10000; ++i) {
        const double rho = 0.01 + 0.98 * u(rng);
        const double ang = (2.0 * u(rng) - 1.0) * kPi * 0.999;
        const geom::PlaneCoord p{rho * std::cos(ang), rho * std::sin(ang)};
        const auto s = geom::sphere_from_fisheye(p, fish);
        const auto fwd = geom::fisheye_from_sphere(*s, fish);
        worst = std::max({worst, std::fabs(fwd.point.x - p.x), std::fabs(fwd.point.y - p.y)});
    }
    const auto pers = geom::ProjectionSpec::perspective(64, 64, kPi / 2.0, 0.5, 0.2);
    for (int i = 0; i < 10000; ++i) {
        const geom::PlaneCoord p{(2.0 * u(rng) - 1.0) * 0.95, (2.0 * u(rng) - 1.0) * 0.95};
        const auto s = geom::sphere_from_perspective(p, pers);
        const auto fwd = geom::perspective_from_sphere(*s, pers);
        worst = std::max({worst, std::fabs(fwd.point.x - p.x), std::fabs(fwd.point.y - p.y)});
    }
    detail << " max coordinate error = " << worst;
    require(worst < 1e-10, detail, "coordinate round trip exceeded 1e-10;");

    const ImageGrid erp = testsupport::smooth_erp(256);
    DegradationConfig cfg;
    cfg.scale = 1;
    cfg.disk_diameter = 512;
    const ImageGrid rt = fisheye_downsample(erp, cfg);
    const double db = metrics::psnr_latitude_band(erp, rt, geom::deg_to_rad(75.0));
    detail << "; raster round trip = " << db << " dB";  // first measured: 99.0 (cap)
    require(db >= 40.0, detail, "raster round trip below 40 dB;");
}

// 4. Degradation pipeline: constancy to 1e-6 at scales {2,4,8}; the
//    fisheye-vs-ERP difference concentrates at high latitudes (>= 2x).
void criterion_degradation(std::ostringstream& detail) {
    for (int scale : {2, 4, 8}) {
        const ImageGrid flat(128, 256, 1, 0.44);
        DegradationConfig cfg;
        cfg.scale = scale;
        const ImageGrid lr = fisheye_downsample(flat, cfg);
        double worst = 0.0;
        for (double v : lr.data) worst = std::max(worst, std::fabs(v - 0.44));
        detail << " constancy[x" << scale << "]=" << worst;
        require(worst < 1e-6, detail, "constancy exceeded 1e-6;");
    }

    const ImageGrid hr = testsupport::smooth_erp(256);
    DegradationConfig cfg;
    cfg.scale = 2;
    const ImageGrid fish = fisheye_downsample(hr, cfg);
    const ImageGrid plain = erp_downsample(hr, 2);
    const auto band_mad = [&](int r0, int r1) {
        double acc = 0.0;
        size_t n = 0;
        for (int r = r0; r < r1; ++r)
            for (int c = 0; c < fish.width; ++c) {
                acc += std::fabs(fish.at(r, c, 0) - plain.at(r, c, 0));
                ++n;
            }
        return acc / static_cast<double>(n);
    };
    const int H = fish.height, b = H / 5;
    const double polar = 0.5 * (band_mad(0, b) + band_mad(H - b, H));
    const double mid = band_mad((H - b) / 2, (H - b) / 2 + b);
    detail << "; polar/mid MAD ratio = " << polar / mid;  // first measured: 4.89
    require(polar >= 2.0 * mid, detail, "high-latitude concentration below 2x;");
}

// 5. Zero-offset reductions against the brute-force oracles: 50 seeds,
//    C=4, H=W=8, w=2, heads in {1,2}, max error < 1e-6.
void criterion_zero_offset(std::ostringstream& detail) {
    double worst_attn = 0.0, worst_conv = 0.0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        for (int heads : {1, 2}) {
            dmod::BlockWeights w = dmod::random_block_weights(4, heads, 2, 16, seed);
            testsupport::zero_offset_net(w.daab_offset);
            testsupport::zero_offset_net(w.dacb_offset);

            std::mt19937_64 rng(seed * 31 + heads);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            dmod::Tensor3 f(4, 8, 8);
            for (auto& v : f.data) v = dist(rng);

            const auto daab = dmod::daab_forward(f, dmod::build_condition_maps(8, 8, 2), w);
            const auto attn_ref = testsupport::oracle_window_attention(f, f, w.attn, 2, heads);
            worst_attn =
                std::max(worst_attn, testsupport::tensor_max_abs_diff(daab.output, attn_ref));

            const auto dacb = dmod::dacb_forward(f, dmod::build_cd(8, 8), w);
            const auto conv_ref = testsupport::oracle_conv3x3_zero_pad(f, w.conv);
            worst_conv =
                std::max(worst_conv, testsupport::tensor_max_abs_diff(dacb.output, conv_ref));
        }
    }
    detail << " max |DAAB - attention oracle| = " << worst_attn
           << ", max |DACB - convolution oracle| = " << worst_conv;
    require(worst_attn < 1e-6 && worst_conv < 1e-6, detail, "zero-offset reduction exceeded 1e-6;");
}

// 6. Condition maps exact to 1e-12 against a long-double evaluation for
//    M in {2,4,64,1024}; offset fields bit-identical across feature inputs.
void criterion_condition_maps(std::ostringstream& detail) {
    const long double pi_l = 3.14159265358979323846264338327950288L;
    double worst = 0.0;
    for (int M : {2, 4, 64, 1024}) {
        const dmod::Tensor3 cd = dmod::build_cd(M, 3);
        for (int m = 0; m < M; ++m) {
            const long double want = std::cos((m + 0.5L - M / 2.0L) / M * pi_l);
            worst = std::max(worst, std::fabs(cd.at(0, m, 1) - static_cast<double>(want)));
        }
    }
    detail << " max |c_d - long double| = " << worst;
    require(worst < 1e-12, detail, "latitude map exceeded 1e-12;");

    const dmod::BlockWeights w = dmod::random_block_weights(4, 2, 2, 16, 99);
    const dmod::ConditionMaps cond = dmod::build_condition_maps(8, 8, 2);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    dmod::Tensor3 f1(4, 8, 8), f2(4, 8, 8);
    for (auto& v : f1.data) v = dist(rng);
    for (auto& v : f2.data) v = dist(rng);
    const auto a = dmod::daab_forward(f1, cond, w);
    const auto b = dmod::daab_forward(f2, cond, w);
    const bool same = std::memcmp(a.offsets.data.data(), b.offsets.data.data(),
                                  a.offsets.data.size() * sizeof(double)) == 0;
    const auto da = dmod::dacb_forward(f1, cond.c_d, w);
    const auto db = dmod::dacb_forward(f2, cond.c_d, w);
    const bool same2 = std::memcmp(da.offsets.data.data(), db.offsets.data.data(),
                                   da.offsets.data.size() * sizeof(double)) == 0;
    require(same && same2, detail, "offset fields depended on the feature input;");
}

// 7. Metric identities: the constant-error closed form, top-row weighting,
//    and the constant-weight collapse.
void criterion_metrics(std::ostringstream& detail) {
    const ImageGrid a(64, 128, 1, 0.5);
    const ImageGrid b(64, 128, 1, 0.5 + 16.0 / 255.0);
    const metrics::WeightMap w = metrics::erp_weights(64, 128);
    const double expected = 20.0 * std::log10(255.0 / 16.0);
    const double p = metrics::psnr(a, b);
    const double wp = metrics::ws_psnr(a, b, w);
    detail << " psnr = " << p;
    require(std::fabs(p - expected) < 1e-9, detail, "constant-error PSNR off;");
    require(std::fabs(wp - p) < 1e-12, detail, "WS-PSNR != PSNR for constant error;");

    ImageGrid top = a;
    for (int c = 0; c < top.width; ++c) top.at(0, c, 0) = 0.9;
    require(metrics::ws_psnr(a, top, w) > metrics::psnr(a, top), detail,
            "top-row error did not raise WS-PSNR;");

    const ImageGrid ra = testsupport::random_image(24, 48, 1, 1);
    const ImageGrid rb = testsupport::random_image(24, 48, 1, 2);
    const metrics::WeightMap flat = metrics::constant_weights(24, 48, 2.5);
    require(std::fabs(metrics::ws_psnr(ra, rb, flat) - metrics::psnr(ra, rb)) < 1e-12, detail,
            "ws_psnr did not collapse under constant weights;");
    require(std::fabs(metrics::ws_ssim(ra, rb, flat) - metrics::ssim(ra, rb)) < 1e-12, detail,
            "ws_ssim did not collapse under constant weights;");
}

// 8. Augmentation over a 10-image corpus: every patch side >= 256, exact
//    Phi_p bookkeeping, the maximal-rectangle oracle, byte-identical reruns.
void criterion_augmentation(std::ostringstream& detail) {
    const fs::path base = fs::temp_directory_path() / "odikit_acceptance_aug";
    fs::remove_all(base);
    const fs::path src = base / "src";
    fs::create_directories(src);
    for (int i = 0; i < 10; ++i) {
        const bool portrait = i % 2 == 0;
        const ImageGrid img = testsupport::random_image(portrait ? 2040 : 1356,
                                                        portrait ? 1356 : 2040, 3, 7000 + i);
        char name[32];
        std::snprintf(name, sizeof(name), "img%02d.png", i);
        io::write_png((src / name).string(), img);
    }

    augment::AugmentConfig cfg;
    cfg.threads = 2;
    const auto records = augment::synthesize_dataset(src.string(), cfg, (base / "out1").string());
    require(!records.empty(), detail, "no patches emitted;");
    for (const auto& rec : records) {
        require(std::min(rec.width, rec.height) >= 256, detail, "patch side below 256;");
        const int phi_h = cfg.phi_h_deg[rec.sub_image];
        const int z0 = rec.phi_p_deg - phi_h;
        require(z0 == -15 || z0 == 0 || z0 == 15, detail, "Phi_p != phi_h + z0;");
    }
    detail << " " << records.size() << " patches";

    const auto rerun = augment::synthesize_dataset(src.string(), cfg, (base / "out2").string());
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    require(slurp(base / "out1" / "manifest.json") == slurp(base / "out2" / "manifest.json"),
            detail, "manifests differ between runs;");
    require(rerun.size() == records.size(), detail, "record counts differ between runs;");

    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> dim(4, 32);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const int h = dim(rng), w = dim(rng);
        ValidityMask mask(h, w, false);
        const double density = 0.3 + 0.5 * coin(rng);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                if (coin(rng) < density) mask.set(r, c, true);
        mask.set(h / 2, w / 2, true);

        const augment::Rect got = augment::find_max_true_rect(mask);
        // Exhaustive O(n^4) area oracle via prefix sums.
        std::vector<std::vector<int>> ps(h + 1, std::vector<int>(w + 1, 0));
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                ps[r + 1][c + 1] = ps[r][c + 1] + ps[r + 1][c] - ps[r][c] + (mask.at(r, c) ? 1 : 0);
        long best = 0;
        for (int r0 = 0; r0 < h; ++r0)
            for (int r1 = r0; r1 < h; ++r1)
                for (int c0 = 0; c0 < w; ++c0)
                    for (int c1 = c0; c1 < w; ++c1) {
                        const long area = static_cast<long>(r1 - r0 + 1) * (c1 - c0 + 1);
                        if (area <= best) continue;
                        if (ps[r1 + 1][c1 + 1] - ps[r0][c1 + 1] - ps[r1 + 1][c0] + ps[r0][c0] == area)
                            best = area;
                    }
        require(static_cast<long>(got.height) * got.width == best, detail,
                "maximal rectangle disagrees with the exhaustive oracle;");
    }
    fs::remove_all(base);
}

// 9. Throughput: x2 fisheye degradation of a 1024x2048 ERP in < 2 s
//    single-threaded, and threaded output byte-identical to serial.
void criterion_throughput(std::ostringstream& detail) {
    const ImageGrid hr = testsupport::smooth_erp(1024);
    DegradationConfig cfg;
    cfg.scale = 2;
    cfg.threads = 1;
    const auto start = std::chrono::steady_clock::now();
    const ImageGrid serial = fisheye_downsample(hr, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail << " serial x2 on 1024x2048: " << secs << " s";
    require(secs < 2.0, detail, "single-threaded x2 degradation exceeded 2 s;");

    cfg.threads = 2;
    const ImageGrid threaded = fisheye_downsample(hr, cfg);
    require(std::memcmp(serial.data.data(), threaded.data.data(),
                        serial.data.size() * sizeof(double)) == 0,
            detail, "threaded output differs from serial;");
}

}  // namespace

int main() {
    Harness h;
    h.run("criterion 1: Jacobian identity suite", criterion_jacobian);
    h.run("criterion 2: ERP/fisheye ratio identity", criterion_ratio_identity);
    h.run("criterion 3: projection round trips", criterion_round_trips);
    h.run("criterion 4: degradation pipeline", criterion_degradation);
    h.run("criterion 5: zero-offset reductions", criterion_zero_offset);
    h.run("criterion 6: condition maps", criterion_condition_maps);
    h.run("criterion 7: metric identities", criterion_metrics);
    h.run("criterion 8: augmentation corpus", criterion_augmentation);
    h.run("criterion 9: throughput and thread determinism", criterion_throughput);
    if (h.failures > 0) {
        std::printf("%d criterion(s) failed\n", h.failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
