#include "henonlab/app/io.hpp"

#include <png.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <vector>

#include "henonlab/app/config.hpp"

namespace henonlab::app {

void check_output_path(const std::string &path)
{
    if (path.empty()) {
        throw ConfigError("empty output path");
    }
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        throw ConfigError("output directory '" + parent.string() + "' does not exist");
    }
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string grid_csv(const FieldGrid &grid)
{
    std::string out = "i,j,x,y,value\n";
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const cplx t = grid.window.node(i, j, grid.nx, grid.ny);
            out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(t.real()) + ','
                   + format_double(t.imag()) + ','
                   + format_double(grid.values[static_cast<std::size_t>(j) * grid.nx + i]) + '\n';
        }
    }
    return out;
}

PngScaling write_png16(const std::string &path, const FieldGrid &grid)
{
    PngScaling s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const double v : grid.values) {
        if (std::isfinite(v)) {
            s.lo = std::min(s.lo, v);
            s.hi = std::max(s.hi, v);
        }
    }
    if (!(s.lo <= s.hi)) {
        s = {0.0, 1.0};
    }
    const double span = s.hi > s.lo ? s.hi - s.lo : 1.0;

    // Encode before libpng takes over so no locals change across setjmp.
    const std::size_t stride = static_cast<std::size_t>(grid.nx) * 2;
    std::vector<unsigned char> image(stride * grid.ny);
    for (int j = 0; j < grid.ny; ++j) {
        unsigned char *row = image.data() + stride * (grid.ny - 1 - j);
        for (int i = 0; i < grid.nx; ++i) {
            const double v = grid.values[static_cast<std::size_t>(j) * grid.nx + i];
            unsigned level = 0;
            if (std::isfinite(v)) {
                level = 1 + static_cast<unsigned>(std::lround((v - s.lo) / span * 65534.0));
            }
            row[2 * i] = static_cast<unsigned char>(level >> 8);
            row[2 * i + 1] = static_cast<unsigned char>(level & 0xff);
        }
    }

    std::unique_ptr<FILE, int (*)(FILE *)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!fp) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (png == nullptr || info == nullptr) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("libpng failed while writing '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, grid.nx, grid.ny, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < grid.ny; ++r) {
        png_write_row(png, image.data() + stride * r);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return s;
}

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << text;
}

void write_json(const std::string &path, const nlohmann::json &j)
{
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
        return;
    }
    write_text(path, text);
}

} // namespace henonlab::app
