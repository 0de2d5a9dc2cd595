#pragma once

#include <vector>

#include <Eigen/Core>

#include "pursuit/image.hpp"

namespace pursuit {

struct RoiRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open [x0, x1) x [y0, y1)

    static RoiRect full(const Image& img) { return {0, 0, img.width, img.height}; }
    bool valid_in(const Image& img) const {
        return x0 >= 0 && y0 >= 0 && x1 <= img.width && y1 <= img.height && x0 < x1 && y0 < y1;
    }
};

struct Corner {
    Eigen::Vector2d pos;   // pixel coordinates
    double response = 0.0;  // min eigenvalue of the structure tensor
};

struct DetectResult {
    std::vector<Corner> corners;
    bool deficit = false;  // fewer corners found than requested
};

// Shi-Tomasi min-eigenvalue response at (x, y), structure tensor summed over a
// (2*half+1)^2 window of central-difference gradients (intensities in [0,1]).
double min_eig_response(const Image& img, int x, int y, int half = 1);

// Up to n corners inside roi with response above quality_level * best,
// greedily selected with a minimum mutual distance.
DetectResult detect_features(const Image& img, const RoiRect& roi, int n,
                             double quality_level = 0.05, double min_distance = 4.0);

}  // namespace pursuit
