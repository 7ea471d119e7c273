#include "wpc/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace wpc {

namespace {

std::string lower_ext(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

unsigned char quantize(double v) {
    double q = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
    return static_cast<unsigned char>(q);
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp)
        throw Error(ErrorCode::IoError, "cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(ErrorCode::IoError, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(ErrorCode::IoError, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::IoError, path + ": PNG decode failed");
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    png_byte color = png_get_color_type(png, info);
    png_byte depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_strip_16(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::IoError, path + ": unsupported channel count");
    }

    std::vector<png_byte> raster(static_cast<size_t>(width) * height * channels);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 i = 0; i < height; ++i)
        rows[i] = raster.data() + static_cast<size_t>(i) * width * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(static_cast<int>(width), static_cast<int>(height), channels);
    for (size_t k = 0; k < raster.size(); ++k) img.data[k] = raster[k] / 255.0;
    return img;
}

void write_png(const std::string& path, const Image& img) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp)
        throw Error(ErrorCode::IoError, "cannot write " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(ErrorCode::IoError, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::IoError, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, path + ": PNG encode failed");
    }

    png_init_io(png, fp.get());
    int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, 8, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<size_t>(img.width) * img.channels);
    for (int i = 0; i < img.height; ++i) {
        for (int j = 0; j < img.width; ++j)
            for (int c = 0; c < img.channels; ++c)
                row[static_cast<size_t>(j) * img.channels + c] = quantize(img.at(i, j, c));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path);

    std::string magic;
    in >> magic;
    int channels;
    if (magic == "P5") channels = 1;
    else if (magic == "P6") channels = 3;
    else throw Error(ErrorCode::BadMagic, path + ": expected binary PGM/PPM");

    auto next_int = [&](int& value) {
        // skip whitespace and '#' comment lines
        while (true) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        if (!(in >> value))
            throw Error(ErrorCode::TruncatedFile, path + ": malformed PNM header");
    };

    int w, h, maxval;
    next_int(w);
    next_int(h);
    next_int(maxval);
    if (w < 1 || h < 1 || maxval != 255)
        throw Error(ErrorCode::IoError, path + ": unsupported PNM layout");
    in.get();  // single whitespace after maxval

    std::vector<unsigned char> buf(static_cast<size_t>(w) * h * channels);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
        throw Error(ErrorCode::TruncatedFile, path + ": PNM payload too short");

    Image img(w, h, channels);
    for (size_t k = 0; k < buf.size(); ++k) img.data[k] = buf[k] / 255.0;
    return img;
}

void write_pnm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path);
    out << (img.channels == 1 ? "P5" : "P6") << "\n"
        << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> buf(img.data.size());
    for (size_t k = 0; k < img.data.size(); ++k) buf[k] = quantize(img.data[k]);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path);
}

Image read_image(const std::string& path) {
    std::string ext = lower_ext(path);
    if (ext == "png") return read_png(path);
    if (ext == "ppm" || ext == "pgm" || ext == "pnm") return read_pnm(path);
    throw Error(ErrorCode::InvalidArgument, path + ": unsupported image extension");
}

void write_image(const std::string& path, const Image& img) {
    std::string ext = lower_ext(path);
    if (ext == "png") return write_png(path, img);
    if (ext == "ppm" || ext == "pgm" || ext == "pnm") return write_pnm(path, img);
    throw Error(ErrorCode::InvalidArgument, path + ": unsupported image extension");
}

Mask read_mask(const std::string& path) {
    Image img = to_gray(read_image(path));
    Mask mask(img.width, img.height);
    for (int i = 0; i < img.height; ++i)
        for (int j = 0; j < img.width; ++j)
            mask.at(i, j) = std::clamp(img.at(i, j), 0.0, 1.0);
    return mask;
}

void write_mask(const std::string& path, const Mask& mask) {
    Image img(mask.width, mask.height, 1);
    for (int i = 0; i < mask.height; ++i)
        for (int j = 0; j < mask.width; ++j) img.at(i, j) = mask.at(i, j);
    write_image(path, img);
}

}  // namespace wpc
