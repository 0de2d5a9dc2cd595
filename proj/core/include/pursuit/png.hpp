#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pursuit/image.hpp"

namespace pursuit {

// 8-bit RGB raster used by the chart renderer.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 bytes per pixel, row-major

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t r = 255, std::uint8_t g = 255, std::uint8_t b = 255)
        : width(w), height(h), data(size_t(w) * h * 3) {
        for (size_t i = 0; i < data.size(); i += 3) {
            data[i] = r;
            data[i + 1] = g;
            data[i + 2] = b;
        }
    }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        std::uint8_t* p = &data[(size_t(y) * width + x) * 3];
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
};

// Minimal zlib-backed PNG writers (8-bit, no interlace). Throw on IO errors.
void write_png_gray(const Image& img, const std::string& path);
void write_png_rgb(const RgbImage& img, const std::string& path);

}  // namespace pursuit
