#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pursuit/camera.hpp"
#include "pursuit/entity.hpp"
#include "pursuit/guidance.hpp"
#include "pursuit/programs.hpp"
#include "pursuit/raster.hpp"
#include "pursuit/singer.hpp"
#include "pursuit/tracker.hpp"

namespace pursuit {

// World-frame occlusion bar, optionally drifting at constant velocity.
struct BarSpec {
    Eigen::Vector2d center{0.0, 0.0};  // m, at t = 0
    double length = 10.0;              // m, along rotation
    double width = 10.0;               // m
    double rotation = 0.0;             // rad
    Eigen::Vector2d velocity{0.0, 0.0};
};

struct ProgramSpec {
    std::string type = "lane_change";  // lane_change | squircle | waypoints | constant

    // lane_change
    double lateral = 4.0;
    double maneuver_duration = 4.0;
    double min_gap = 20.0;
    double first_after = 8.0;

    // squircle
    double period = 360.0;
    double v_corner = 14.79;
    double v_straight = 22.63;

    // waypoints
    std::vector<Eigen::Vector2d> waypoints;
    double waypoint_speed = 10.0;
    bool loop = false;

    // constant
    VehicleCommand constant_cmd;
};

// Full run description, loadable from a JSON file. Unknown keys are rejected
// so typos fail loudly.
struct Scenario {
    std::string name = "unnamed";
    EntityState uas;
    EntityState vehicle;
    double duration = 10.0;
    double dt = 1.0 / 30.0;
    std::uint64_t seed = 1;

    ProgramSpec program;
    std::vector<BarSpec> bars;
    double vehicle_length = 5.0;  // m
    double vehicle_width = 2.0;   // m
    double measurement_noise_px = 0.0;

    CameraModel camera;  // altitude is taken from the UAS initial state
    GuidanceConfig guidance;
    FilterConfig filter;  // r0 defaults to gsd^2 * I unless the file sets it
    TrackerConfig tracker;
};

// Throws std::runtime_error with a path/position diagnostic on parse errors.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text, const std::string& origin = "<string>");

// Instantiates the vehicle program described by the scenario.
std::unique_ptr<VehicleProgram> make_program(const Scenario& sc, std::uint64_t seed);

// Bar scene objects at time t (drifting bars move linearly).
std::vector<SceneObject> bar_objects(const Scenario& sc, double t, const Palette& pal);

}  // namespace pursuit
