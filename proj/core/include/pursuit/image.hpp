#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pursuit {

// 8-bit grayscale raster.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h, std::uint8_t fill = 0) : width(w), height(h), data(size_t(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return data[size_t(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[size_t(y) * width + x]; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

    // Bilinear sample with clamped borders, intensities in [0, 255].
    float sample(float x, float y) const;

    // 2x decimated level (simple 2x2 box filter).
    Image half() const;

    bool operator==(const Image&) const = default;
};

struct Frame {
    Image image;
    double timestamp = 0.0;
    int index = 0;
};

void write_pgm(const Image& img, const std::string& path);

// Coarse-to-fine pyramid; levels[0] is full resolution.
struct Pyramid {
    std::vector<Image> levels;
    static Pyramid build(const Image& base, int num_levels);
};

}  // namespace pursuit
