#include "pursuit/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pursuit {

double min_eig_response(const Image& img, int x, int y, int half) {
    double gxx = 0.0, gyy = 0.0, gxy = 0.0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
            const int px = x + dx, py = y + dy;
            if (px < 1 || py < 1 || px >= img.width - 1 || py >= img.height - 1) continue;
            const double ix = (img.at(px + 1, py) - img.at(px - 1, py)) / (2.0 * 255.0);
            const double iy = (img.at(px, py + 1) - img.at(px, py - 1)) / (2.0 * 255.0);
            gxx += ix * ix;
            gyy += iy * iy;
            gxy += ix * iy;
        }
    }
    const double tr = gxx + gyy;
    const double det_part = std::sqrt((gxx - gyy) * (gxx - gyy) + 4.0 * gxy * gxy);
    return 0.5 * (tr - det_part);
}

DetectResult detect_features(const Image& img, const RoiRect& roi, int n,
                             double quality_level, double min_distance) {
    if (!roi.valid_in(img)) throw std::invalid_argument("detect_features: roi outside frame");

    std::vector<Corner> candidates;
    double best = 0.0;
    const int x0 = std::max(roi.x0, 1), y0 = std::max(roi.y0, 1);
    const int x1 = std::min(roi.x1, img.width - 1), y1 = std::min(roi.y1, img.height - 1);

    std::vector<double> resp(size_t(x1 - x0) * size_t(y1 - y0), 0.0);
    auto r_at = [&](int x, int y) -> double& {
        return resp[size_t(y - y0) * size_t(x1 - x0) + size_t(x - x0)];
    };
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            const double r = min_eig_response(img, x, y);
            r_at(x, y) = r;
            best = std::max(best, r);
        }
    if (best <= 0.0) return {{}, n > 0};

    // 3x3 non-max suppression, then quality gate.
    const double threshold = quality_level * best;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const double r = r_at(x, y);
            if (r < threshold) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < x0 || ny < y0 || nx >= x1 || ny >= y1) continue;
                    if (r_at(nx, ny) > r) { is_max = false; break; }
                }
            if (is_max) candidates.push_back({{double(x), double(y)}, r});
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Corner& a, const Corner& b) { return a.response > b.response; });

    DetectResult out;
    for (const Corner& c : candidates) {
        if (static_cast<int>(out.corners.size()) >= n) break;
        bool clear = true;
        for (const Corner& kept : out.corners) {
            if ((kept.pos - c.pos).norm() < min_distance) { clear = false; break; }
        }
        if (clear) out.corners.push_back(c);
    }
    out.deficit = static_cast<int>(out.corners.size()) < n;
    return out;
}

}  // namespace pursuit
