#include "pursuit/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pursuit {

float Image::sample(float x, float y) const {
    const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, width - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, height - 1);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const float fx = std::clamp(x - static_cast<float>(x0), 0.0f, 1.0f);
    const float fy = std::clamp(y - static_cast<float>(y0), 0.0f, 1.0f);
    const float top = at(x0, y0) * (1.0f - fx) + at(x1, y0) * fx;
    const float bot = at(x0, y1) * (1.0f - fx) + at(x1, y1) * fx;
    return top * (1.0f - fy) + bot * fy;
}

Image Image::half() const {
    Image out(std::max(width / 2, 1), std::max(height / 2, 1));
    for (int y = 0; y < out.height; ++y) {
        const int y0 = 2 * y, y1 = std::min(2 * y + 1, height - 1);
        for (int x = 0; x < out.width; ++x) {
            const int x0 = 2 * x, x1 = std::min(2 * x + 1, width - 1);
            const int sum = at(x0, y0) + at(x1, y0) + at(x0, y1) + at(x1, y1);
            out.at(x, y) = static_cast<std::uint8_t>((sum + 2) / 4);
        }
    }
    return out;
}

void write_pgm(const Image& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_pgm: cannot open " + path);
    f << "P5\n" << img.width << " " << img.height << "\n255\n";
    f.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
}

Pyramid Pyramid::build(const Image& base, int num_levels) {
    Pyramid p;
    p.levels.reserve(static_cast<size_t>(num_levels));
    p.levels.push_back(base);
    for (int l = 1; l < num_levels; ++l) p.levels.push_back(p.levels.back().half());
    return p;
}

}  // namespace pursuit
