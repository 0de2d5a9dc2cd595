#pragma once

#include <array>
#include <vector>

#include "pursuit/camera.hpp"
#include "pursuit/entity.hpp"
#include "pursuit/image.hpp"

namespace pursuit {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;

    // Rec. 601 luminance, rounded.
    std::uint8_t gray() const {
        return static_cast<std::uint8_t>(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
    }
};

// Oriented world-frame rectangle.
struct SceneObject {
    Eigen::Vector2d center{0.0, 0.0};  // m
    double length = 1.0;               // m, along the rotation direction
    double width = 1.0;                // m, across
    double rotation = 0.0;             // rad
    Rgb color;
};

// Default palette. The vehicle body carries a high-contrast 4-quadrant
// pattern so the corner detector finds interior features.
struct Palette {
    Rgb ground{170, 170, 170};
    Rgb lane_marking{230, 230, 60};
    Rgb vehicle_light{250, 250, 250};
    Rgb vehicle_dark{30, 30, 30};
    Rgb bar{55, 50, 48};
};

// Painter's-order scene: later objects overwrite earlier ones.
// Fills pixels whose centers lie inside the projected rectangle; no
// anti-aliasing. Deterministic for a given scene and camera.
Frame rasterize(const std::vector<SceneObject>& scene, const CameraModel& cam,
                const Eigen::Vector2d& uas_ground_pos, Rgb background,
                double timestamp = 0.0, int frame_index = 0);

// Four quadrant sub-rectangles forming the textured vehicle body.
std::vector<SceneObject> vehicle_objects(const EntityState& vehicle, double length_m,
                                         double width_m, const Palette& pal);

}  // namespace pursuit
