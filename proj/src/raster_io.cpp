#include "odikit/raster_io.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

namespace odikit::io {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

ImageGrid read_png_file(const std::string& path, FILE* fp) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> buffer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode failed: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
#if defined(PNG_READ_SWAP_SUPPORTED)
    if (depth == 16) png_set_swap(png);  // PNG stores big-endian samples
#endif
    png_read_update_info(png, info);

    depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    const size_t row_bytes = png_get_rowbytes(png, info);
    buffer.resize(row_bytes * height);
    row_ptrs.resize(height);
    for (int r = 0; r < height; ++r) row_ptrs[r] = buffer.data() + row_bytes * r;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageGrid img(height, width, channels);
    const size_t n = static_cast<size_t>(height) * width * channels;
    if (depth == 16) {
        const auto* s = reinterpret_cast<const uint16_t*>(buffer.data());
        for (size_t i = 0; i < n; ++i) img.data[i] = s[i] / 65535.0;
    } else {
        for (size_t i = 0; i < n; ++i) img.data[i] = buffer[i] / 255.0;
    }
    return img;
}

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

ImageGrid read_jpeg_file(const std::string& path, FILE* fp) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError("JPEG decode failed: " + path);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    jpeg_start_decompress(&cinfo);

    const int width = static_cast<int>(cinfo.output_width);
    const int height = static_cast<int>(cinfo.output_height);
    const int channels = cinfo.output_components;
    ImageGrid img(height, width, channels);
    std::vector<JSAMPLE> row(static_cast<size_t>(width) * channels);
    JSAMPROW rp = row.data();
    for (int r = 0; r < height; ++r) {
        jpeg_read_scanlines(&cinfo, &rp, 1);
        double* dst = img.pixel(r, 0);
        for (size_t i = 0; i < row.size(); ++i) dst[i] = row[i] / 255.0;
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

}  // namespace

ImageGrid read_image(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path);
    unsigned char magic[8] = {};
    const size_t got = std::fread(magic, 1, sizeof(magic), fp.get());
    std::rewind(fp.get());
    if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) return read_png_file(path, fp.get());
    if (got >= 2 && magic[0] == 0xFF && magic[1] == 0xD8) return read_jpeg_file(path, fp.get());
    throw IoError("unsupported raster format: " + path);
}

void write_png(const std::string& path, const ImageGrid& img, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw ConfigError("PNG bit depth must be 8 or 16");
    if (img.channels < 1 || img.channels > 4 || img.channels == 2)
        throw ConfigError("PNG writer supports 1, 3, or 4 channels");
    if (img.height == 0 || img.width == 0) throw ConfigError("empty raster");

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open " + path + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }
    std::vector<png_byte> buffer;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + path);
    }
    png_init_io(png, fp.get());

    const int color = img.channels == 1   ? PNG_COLOR_TYPE_GRAY
                      : img.channels == 3 ? PNG_COLOR_TYPE_RGB
                                          : PNG_COLOR_TYPE_RGB_ALPHA;
    png_set_IHDR(png, info, img.width, img.height, bit_depth, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const size_t samples = static_cast<size_t>(img.width) * img.channels;
    const double maxval = bit_depth == 8 ? 255.0 : 65535.0;
    buffer.resize(samples * img.height * (bit_depth / 8));
    row_ptrs.resize(img.height);
    for (int r = 0; r < img.height; ++r) {
        png_bytep row = buffer.data() + static_cast<size_t>(r) * samples * (bit_depth / 8);
        row_ptrs[r] = row;
        const double* src = img.pixel(r, 0);
        for (size_t i = 0; i < samples; ++i) {
            const double v = std::clamp(src[i], 0.0, 1.0) * maxval;
            const auto q = static_cast<unsigned>(std::lround(v));
            if (bit_depth == 8) {
                row[i] = static_cast<png_byte>(q);
            } else {
                row[2 * i] = static_cast<png_byte>(q >> 8);  // PNG is big-endian
                row[2 * i + 1] = static_cast<png_byte>(q & 0xFF);
            }
        }
    }
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(fp.get()) != 0) throw IoError("write failed: " + path);
}

}  // namespace odikit::io
