#include "pursuit/flow.hpp"

#include <cmath>

namespace pursuit {

namespace {

constexpr double kInv255 = 1.0 / 255.0;

struct LevelTrack {
    Eigen::Vector2d pos;
    bool ok = false;
    double residual = 0.0;
};

// One Lucas-Kanade solve at a single pyramid level.
// `point` is the template location in prev, `guess` the current estimate in next.
LevelTrack track_level(const Image& prev, const Image& next, const Eigen::Vector2d& point,
                       Eigen::Vector2d guess, const FlowConfig& cfg, bool is_base_level) {
    const int half = cfg.window / 2;
    const int area = cfg.window * cfg.window;

    auto in_bounds = [&](const Image& img, const Eigen::Vector2d& p) {
        return p.x() - half >= 1.0 && p.y() - half >= 1.0 && p.x() + half < img.width - 2.0 &&
               p.y() + half < img.height - 2.0;
    };

    LevelTrack out{guess, false, 1.0};
    // Near the border a coarse-level window may not fit even though the
    // base-level one does; defer to the finer levels instead of failing.
    auto defer = [&]() {
        out.pos = guess;
        out.ok = !is_base_level;
        return out;
    };
    if (!in_bounds(prev, point)) return defer();

    // Template window intensities and gradients from prev.
    std::vector<double> ti(area), gx(area), gy(area);
    double gxx = 0.0, gyy = 0.0, gxy = 0.0;
    int idx = 0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx, ++idx) {
            const float x = static_cast<float>(point.x() + dx);
            const float y = static_cast<float>(point.y() + dy);
            ti[idx] = prev.sample(x, y) * kInv255;
            gx[idx] = (prev.sample(x + 1, y) - prev.sample(x - 1, y)) * 0.5 * kInv255;
            gy[idx] = (prev.sample(x, y + 1) - prev.sample(x, y - 1)) * 0.5 * kInv255;
            gxx += gx[idx] * gx[idx];
            gyy += gy[idx] * gy[idx];
            gxy += gx[idx] * gy[idx];
        }
    }

    const double tr = gxx + gyy;
    const double min_eig =
        0.5 * (tr - std::sqrt((gxx - gyy) * (gxx - gyy) + 4.0 * gxy * gxy));
    if (min_eig / area < cfg.min_eig) {
        if (is_base_level) return out;  // untrackable template
        out.pos = guess;
        out.ok = true;  // defer judgement to finer levels
        return out;
    }
    const double det = gxx * gyy - gxy * gxy;

    double residual = 1.0;
    for (int it = 0; it < cfg.max_iters; ++it) {
        if (!in_bounds(next, guess)) return defer();
        double bx = 0.0, by = 0.0, res = 0.0;
        idx = 0;
        for (int dy = -half; dy <= half; ++dy) {
            for (int dx = -half; dx <= half; ++dx, ++idx) {
                const double ni = next.sample(static_cast<float>(guess.x() + dx),
                                              static_cast<float>(guess.y() + dy)) * kInv255;
                const double di = ti[idx] - ni;
                bx += di * gx[idx];
                by += di * gy[idx];
                res += std::abs(di);
            }
        }
        residual = res / area;
        const Eigen::Vector2d step{(gyy * bx - gxy * by) / det, (gxx * by - gxy * bx) / det};
        guess += step;
        if (step.norm() < cfg.epsilon) break;
    }
    if (!in_bounds(next, guess)) return defer();

    out.pos = guess;
    out.residual = residual;
    out.ok = !is_base_level || residual <= cfg.residual_max;
    return out;
}

std::vector<FlowPoint> run_flow(const Pyramid& prev, const Pyramid& next,
                                const std::vector<Eigen::Vector2d>& points,
                                const FlowConfig& cfg) {
    const int levels = static_cast<int>(std::min(prev.levels.size(), next.levels.size()));
    std::vector<FlowPoint> out(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        const double top_scale = std::pow(2.0, -(levels - 1));
        Eigen::Vector2d guess = points[i] * top_scale;
        bool ok = true;
        double residual = 1.0;
        for (int l = levels - 1; l >= 0; --l) {
            const double scale = std::pow(2.0, -l);
            const LevelTrack t = track_level(prev.levels[size_t(l)], next.levels[size_t(l)],
                                             points[i] * scale, guess, cfg, l == 0);
            ok = t.ok;
            residual = t.residual;
            guess = t.pos;
            if (!ok && l > 0) break;  // hard failure below the top level
            if (l > 0) guess *= 2.0;
        }
        out[i] = {guess, ok, residual};
    }
    return out;
}

}  // namespace

std::vector<FlowPoint> pyramidal_flow(const Pyramid& prev, const Pyramid& next,
                                      const std::vector<Eigen::Vector2d>& points,
                                      const FlowConfig& cfg) {
    return run_flow(prev, next, points, cfg);
}

std::vector<FlowPoint> pyramidal_flow_fb(const Pyramid& prev, const Pyramid& next,
                                         const std::vector<Eigen::Vector2d>& points,
                                         const FlowConfig& cfg) {
    std::vector<FlowPoint> fwd = run_flow(prev, next, points, cfg);
    std::vector<Eigen::Vector2d> tracked;
    std::vector<size_t> index;
    for (size_t i = 0; i < fwd.size(); ++i) {
        if (fwd[i].ok) {
            tracked.push_back(fwd[i].pos);
            index.push_back(i);
        }
    }
    const std::vector<FlowPoint> back = run_flow(next, prev, tracked, cfg);
    for (size_t j = 0; j < back.size(); ++j) {
        const size_t i = index[j];
        if (!back[j].ok || (back[j].pos - points[i]).norm() > cfg.fb_threshold)
            fwd[i].ok = false;
    }
    return fwd;
}

}  // namespace pursuit
