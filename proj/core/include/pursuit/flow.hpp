#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pursuit/image.hpp"

namespace pursuit {

struct FlowConfig {
    int window = 15;           // odd window side, pixels
    int levels = 3;            // pyramid levels
    int max_iters = 30;
    double epsilon = 0.01;     // convergence step size, pixels
    double min_eig = 1e-4;     // per-pixel-normalized eigenvalue gate
    double residual_max = 0.10;     // mean abs intensity residual, [0,1] units
    double fb_threshold = 1.0;      // forward-backward discrepancy, pixels
};

struct FlowPoint {
    Eigen::Vector2d pos;  // tracked position in the next frame
    bool ok = false;
    double residual = 0.0;
};

// Iterative pyramidal Lucas-Kanade for a sparse point set. A point fails when
// the normal matrix is near singular, iterations leave the image or diverge,
// or the final residual exceeds the threshold.
std::vector<FlowPoint> pyramidal_flow(const Pyramid& prev, const Pyramid& next,
                                      const std::vector<Eigen::Vector2d>& points,
                                      const FlowConfig& cfg);

// pyramidal_flow plus a backward pass: points whose retracked position
// deviates more than fb_threshold from the original are marked failed.
std::vector<FlowPoint> pyramidal_flow_fb(const Pyramid& prev, const Pyramid& next,
                                         const std::vector<Eigen::Vector2d>& points,
                                         const FlowConfig& cfg);

}  // namespace pursuit
