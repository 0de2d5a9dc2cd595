#include "pursuit/raster.hpp"

#include <algorithm>
#include <cmath>

namespace pursuit {

namespace {

struct PixelRect {
    int x0, y0, x1, y1;  // inclusive
};

}  // namespace

Frame rasterize(const std::vector<SceneObject>& scene, const CameraModel& cam,
                const Eigen::Vector2d& uas_ground_pos, Rgb background,
                double timestamp, int frame_index) {
    Frame frame;
    frame.timestamp = timestamp;
    frame.index = frame_index;
    frame.image = Image(cam.width_px(), cam.height_px(), background.gray());
    Image& img = frame.image;

    for (const SceneObject& obj : scene) {
        const std::uint8_t gray = obj.color.gray();
        const double c = std::cos(obj.rotation), s = std::sin(obj.rotation);
        const double hl = 0.5 * obj.length, hw = 0.5 * obj.width;

        // Pixel bounding box from the projected corners.
        PixelRect box{img.width, img.height, -1, -1};
        for (int sx : {-1, 1}) {
            for (int sy : {-1, 1}) {
                const Eigen::Vector2d corner =
                    obj.center + Eigen::Vector2d(sx * hl * c - sy * hw * s,
                                                 sx * hl * s + sy * hw * c);
                const Eigen::Vector2d px = project(cam, uas_ground_pos, corner).px;
                box.x0 = std::min(box.x0, static_cast<int>(std::floor(px.x())));
                box.x1 = std::max(box.x1, static_cast<int>(std::ceil(px.x())));
                box.y0 = std::min(box.y0, static_cast<int>(std::floor(px.y())));
                box.y1 = std::max(box.y1, static_cast<int>(std::ceil(px.y())));
            }
        }
        box.x0 = std::max(box.x0, 0);
        box.y0 = std::max(box.y0, 0);
        box.x1 = std::min(box.x1, img.width - 1);
        box.y1 = std::min(box.y1, img.height - 1);
        if (box.x0 > box.x1 || box.y0 > box.y1) continue;

        // Inside test in the rectangle's own frame, at pixel centers.
        const double gsd = cam.gsd_m();
        const double cx = 0.5 * img.width, cy = 0.5 * img.height;
        for (int py = box.y0; py <= box.y1; ++py) {
            const double wy = uas_ground_pos.y() - (py + 0.5 - cy) * gsd - obj.center.y();
            for (int px = box.x0; px <= box.x1; ++px) {
                const double wx = uas_ground_pos.x() + (px + 0.5 - cx) * gsd - obj.center.x();
                const double u = wx * c + wy * s;
                const double v = -wx * s + wy * c;
                if (std::abs(u) <= hl && std::abs(v) <= hw) img.at(px, py) = gray;
            }
        }
    }
    return frame;
}

std::vector<SceneObject> vehicle_objects(const EntityState& vehicle, double length_m,
                                         double width_m, const Palette& pal) {
    std::vector<SceneObject> objs;
    const double c = std::cos(vehicle.heading), s = std::sin(vehicle.heading);
    const double ql = 0.25 * length_m, qw = 0.25 * width_m;
    for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
            SceneObject q;
            q.center = vehicle.position +
                       Eigen::Vector2d(sx * ql * c - sy * qw * s, sx * ql * s + sy * qw * c);
            q.length = 0.5 * length_m;
            q.width = 0.5 * width_m;
            q.rotation = vehicle.heading;
            q.color = (sx == sy) ? pal.vehicle_light : pal.vehicle_dark;
            objs.push_back(q);
        }
    }
    return objs;
}

}  // namespace pursuit
