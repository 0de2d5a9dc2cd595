#include "pursuit/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace pursuit {

double CameraModel::focal_length_mm() const {
    if (fov_deg <= 0.0 || fov_deg >= 180.0)
        throw std::invalid_argument("CameraModel: fov must be in (0, 180) degrees");
    const double half = 0.5 * fov_deg * M_PI / 180.0;
    return 0.5 * sensor_width_mm / std::tan(half);
}

ImagePoint project(const CameraModel& cam, const Eigen::Vector2d& uas_ground_pos,
                   const Eigen::Vector2d& world_point) {
    const double scale = cam.focal_length_mm() / cam.altitude_m;  // mm per meter
    const Eigen::Vector2d d = world_point - uas_ground_pos;
    ImagePoint ip;
    ip.sensor_mm = scale * d;
    const double mm_per_px = cam.pixel_size_um * 1e-3;
    ip.px = {ip.sensor_mm.x() / mm_per_px + 0.5 * cam.width_px(),
             -ip.sensor_mm.y() / mm_per_px + 0.5 * cam.height_px()};
    return ip;
}

Eigen::Vector2d unproject_sensor(const CameraModel& cam, const Eigen::Vector2d& uas_ground_pos,
                                 const Eigen::Vector2d& sensor_mm) {
    const double scale = cam.altitude_m / cam.focal_length_mm();  // meters per mm
    return uas_ground_pos + scale * sensor_mm;
}

Eigen::Vector2d unproject_px(const CameraModel& cam, const Eigen::Vector2d& uas_ground_pos,
                             const Eigen::Vector2d& px) {
    const double mm_per_px = cam.pixel_size_um * 1e-3;
    const Eigen::Vector2d sensor{(px.x() - 0.5 * cam.width_px()) * mm_per_px,
                                 -(px.y() - 0.5 * cam.height_px()) * mm_per_px};
    return unproject_sensor(cam, uas_ground_pos, sensor);
}

}  // namespace pursuit
