#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <vector>

#include <jpeglib.h>

#include "odikit/raster_io.hpp"
#include "support/test_images.hpp"

using namespace odikit;
using testsupport::random_image;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Minimal JPEG encoder, test-only, to exercise the reader.
void write_test_jpeg(const std::string& path, const ImageGrid& img) {
    jpeg_compress_struct cinfo;
    jpeg_error_mgr jerr;
    cinfo.err = jpeg_std_error(&jerr);
    jpeg_create_compress(&cinfo);
    FILE* fp = std::fopen(path.c_str(), "wb");
    REQUIRE(fp != nullptr);
    jpeg_stdio_dest(&cinfo, fp);
    cinfo.image_width = img.width;
    cinfo.image_height = img.height;
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, 95, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    std::vector<JSAMPLE> row(static_cast<size_t>(img.width) * 3);
    while (cinfo.next_scanline < cinfo.image_height) {
        const double* src = img.pixel(static_cast<int>(cinfo.next_scanline), 0);
        for (size_t i = 0; i < row.size(); ++i)
            row[i] = static_cast<JSAMPLE>(std::lround(src[i] * 255.0));
        JSAMPROW rp = row.data();
        jpeg_write_scanlines(&cinfo, &rp, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::fclose(fp);
}

}  // namespace

TEST_CASE("8-bit PNG round trip is exact at quantization resolution") {
    const ImageGrid img = random_image(23, 31, 3, 11);
    const std::string path = temp_path("odikit_io_8bit.png");
    io::write_png(path, img, 8);
    const ImageGrid back = io::read_image(path);
    CHECK(back.height == img.height);
    CHECK(back.width == img.width);
    CHECK(back.channels == 3);
    CHECK(testsupport::max_abs_diff(img, back) <= 0.5 / 255.0 + 1e-12);

    // Re-encoding the decoded raster is lossless.
    const std::string path2 = temp_path("odikit_io_8bit_again.png");
    io::write_png(path2, back, 8);
    CHECK(testsupport::max_abs_diff(back, io::read_image(path2)) == 0.0);
}

TEST_CASE("16-bit PNG keeps deep precision") {
    const ImageGrid img = random_image(16, 16, 1, 12);
    const std::string path = temp_path("odikit_io_16bit.png");
    io::write_png(path, img, 16);
    const ImageGrid back = io::read_image(path);
    CHECK(testsupport::max_abs_diff(img, back) <= 0.5 / 65535.0 + 1e-12);
}

TEST_CASE("gray PNG round trip") {
    const ImageGrid img = random_image(9, 13, 1, 13);
    const std::string path = temp_path("odikit_io_gray.png");
    io::write_png(path, img, 8);
    const ImageGrid back = io::read_image(path);
    CHECK(back.channels == 1);
    CHECK(testsupport::max_abs_diff(img, back) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("JPEG files are readable") {
    const ImageGrid img(24, 32, 3, 0.5);
    const std::string path = temp_path("odikit_io_test.jpg");
    write_test_jpeg(path, img);
    const ImageGrid back = io::read_image(path);
    CHECK(back.height == 24);
    CHECK(back.width == 32);
    CHECK(back.channels == 3);
    CHECK(testsupport::max_abs_diff(img, back) < 0.02);  // lossy codec
}

TEST_CASE("failures surface as IoError") {
    CHECK_THROWS_AS(io::read_image(temp_path("odikit_io_missing.png")), IoError);
    const std::string garbage = temp_path("odikit_io_garbage.bin");
    std::FILE* fp = std::fopen(garbage.c_str(), "wb");
    std::fputs("garbage", fp);
    std::fclose(fp);
    CHECK_THROWS_AS(io::read_image(garbage), IoError);
    CHECK_THROWS_AS(io::write_png("/nonexistent-dir/x.png", ImageGrid(2, 2, 1, 0.0), 8), IoError);
    CHECK_THROWS_AS(io::write_png(temp_path("x.png"), ImageGrid(2, 2, 2, 0.0), 8), ConfigError);
}
