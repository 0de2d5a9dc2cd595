#pragma once

#include <Eigen/Core>

namespace pursuit {

// Downward-facing orthographic camera centered on the UAS ground point,
// axis-aligned with the world frame.
//
// Axis convention (used by the renderer, tracker, and estimator alike):
// world +x maps to image +column, world +y maps to image -row.
struct CameraModel {
    double fov_deg = 47.0;        // full field of view
    double sensor_width_mm = 5.0;
    double pixel_size_um = 6.25;
    double altitude_m = 150.0;    // UAS altitude above the ground plane

    // phi = (W/2) / tan(fov/2)
    double focal_length_mm() const;

    int width_px() const { return static_cast<int>(sensor_width_mm * 1000.0 / pixel_size_um); }
    int height_px() const { return width_px(); }

    // Ground-sample distance: meters of ground covered by one pixel.
    double gsd_m() const { return altitude_m * pixel_size_um * 1e-3 / focal_length_mm(); }

    // Width of the ground footprint seen by the sensor, in meters.
    double footprint_m() const { return sensor_width_mm * altitude_m / focal_length_mm(); }
};

// Continuous image coordinates of a world point: sensor millimeters
// (origin at the principal point) and fractional pixels (origin at the
// top-left corner). pixel() floors to the integer pixel containing the point.
struct ImagePoint {
    Eigen::Vector2d sensor_mm;
    Eigen::Vector2d px;

    Eigen::Vector2i pixel() const {
        return {static_cast<int>(std::floor(px.x())), static_cast<int>(std::floor(px.y()))};
    }
};

ImagePoint project(const CameraModel& cam, const Eigen::Vector2d& uas_ground_pos,
                   const Eigen::Vector2d& world_point);

Eigen::Vector2d unproject_sensor(const CameraModel& cam, const Eigen::Vector2d& uas_ground_pos,
                                 const Eigen::Vector2d& sensor_mm);

Eigen::Vector2d unproject_px(const CameraModel& cam, const Eigen::Vector2d& uas_ground_pos,
                             const Eigen::Vector2d& px);

}  // namespace pursuit
