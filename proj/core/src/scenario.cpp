#include "pursuit/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pursuit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw std::runtime_error("scenario " + origin + ": " + msg);
}

void check_keys(const json& j, const std::string& origin, const std::string& where,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) fail(origin, "unknown key \"" + key + "\" in " + where);
    }
}

Eigen::Vector2d read_vec2(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(origin, where + " must be a [x, y] number pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

EntityState read_entity(const json& j, const std::string& origin, const std::string& where) {
    check_keys(j, origin, where, {"position", "speed", "heading_deg", "heading", "altitude"});
    EntityState s;
    if (!j.contains("position")) fail(origin, where + " missing \"position\"");
    s.position = read_vec2(j.at("position"), origin, where + ".position");
    s.speed = j.value("speed", 0.0);
    if (s.speed < 0.0) fail(origin, where + ".speed must be >= 0");
    if (j.contains("heading_deg") && j.contains("heading"))
        fail(origin, where + ": give heading or heading_deg, not both");
    if (j.contains("heading_deg"))
        s.heading = j.at("heading_deg").get<double>() * M_PI / 180.0;
    else
        s.heading = j.value("heading", 0.0);
    s.heading = wrap_angle(s.heading);
    s.altitude = j.value("altitude", 0.0);
    if (s.altitude < 0.0) fail(origin, where + ".altitude must be >= 0");
    return s;
}

ProgramSpec read_program(const json& j, const std::string& origin) {
    ProgramSpec p;
    check_keys(j, origin, "program",
               {"type", "lateral", "maneuver_duration", "min_gap", "first_after", "period",
                "v_corner", "v_straight", "waypoints", "waypoint_speed", "loop", "a_b",
                "delta_b"});
    p.type = j.value("type", std::string("lane_change"));
    if (p.type != "lane_change" && p.type != "squircle" && p.type != "waypoints" &&
        p.type != "constant")
        fail(origin, "program.type must be lane_change | squircle | waypoints | constant");
    p.lateral = j.value("lateral", p.lateral);
    p.maneuver_duration = j.value("maneuver_duration", p.maneuver_duration);
    p.min_gap = j.value("min_gap", p.min_gap);
    p.first_after = j.value("first_after", p.first_after);
    p.period = j.value("period", p.period);
    p.v_corner = j.value("v_corner", p.v_corner);
    p.v_straight = j.value("v_straight", p.v_straight);
    p.waypoint_speed = j.value("waypoint_speed", p.waypoint_speed);
    p.loop = j.value("loop", p.loop);
    p.constant_cmd.a_b = j.value("a_b", 0.0);
    p.constant_cmd.delta_b = j.value("delta_b", 0.0);
    if (j.contains("waypoints"))
        for (const auto& w : j.at("waypoints"))
            p.waypoints.push_back(read_vec2(w, origin, "program.waypoints[]"));
    if (p.type == "waypoints" && p.waypoints.size() < 2)
        fail(origin, "program.type waypoints needs >= 2 waypoints");
    if (p.period <= 0.0) fail(origin, "program.period must be > 0");
    return p;
}

BarSpec read_bar(const json& j, const std::string& origin) {
    BarSpec b;
    check_keys(j, origin, "bars[]", {"center", "length", "width", "rotation", "velocity"});
    if (!j.contains("center")) fail(origin, "bars[] missing \"center\"");
    b.center = read_vec2(j.at("center"), origin, "bars[].center");
    b.length = j.value("length", b.length);
    b.width = j.value("width", b.width);
    b.rotation = j.value("rotation", b.rotation);
    if (b.length <= 0.0 || b.width <= 0.0) fail(origin, "bars[] size must be positive");
    if (j.contains("velocity")) b.velocity = read_vec2(j.at("velocity"), origin, "bars[].velocity");
    return b;
}

void read_guidance(const json& j, const std::string& origin, GuidanceConfig* g) {
    check_keys(j, origin, "guidance",
               {"k1", "k2", "y1d", "radius", "a_lat_max", "a_long_max", "epsilon_v"});
    g->k1 = j.value("k1", g->k1);
    g->k2 = j.value("k2", g->k2);
    g->y1d = j.value("y1d", g->y1d);
    g->radius = j.value("radius", g->radius);
    g->a_lat_max = j.value("a_lat_max", g->a_lat_max);
    g->a_long_max = j.value("a_long_max", g->a_long_max);
    g->epsilon_v = j.value("epsilon_v", g->epsilon_v);
    if (g->k1 <= 0.0 || g->k2 <= 0.0) fail(origin, "guidance gains must be positive");
    if (g->y1d >= 0.0) fail(origin, "guidance.y1d must be negative");
    if (g->radius <= 0.0) fail(origin, "guidance.radius must be positive");
}

void read_filter(const json& j, const std::string& origin, FilterConfig* f) {
    check_keys(j, origin, "filter",
               {"alpha", "sigma", "r0", "inflation_factor", "inflation_cap"});
    f->alpha = j.value("alpha", f->alpha);
    f->sigma = j.value("sigma", f->sigma);
    f->inflation_factor = j.value("inflation_factor", f->inflation_factor);
    f->inflation_cap = j.value("inflation_cap", f->inflation_cap);
    if (j.contains("r0")) {
        const double r0 = j.at("r0").get<double>();
        if (r0 <= 0.0) fail(origin, "filter.r0 must be positive");
        f->r0 = r0 * Eigen::Matrix2d::Identity();
    }
    if (f->alpha <= 0.0) fail(origin, "filter.alpha must be positive");
    if (f->sigma < 0.0) fail(origin, "filter.sigma must be >= 0");
}

void read_tracker(const json& j, const std::string& origin, TrackerConfig* t) {
    check_keys(j, origin, "tracker",
               {"num_points", "quality_level", "min_distance", "ncc_threshold",
                "part_ncc_threshold", "search_half0", "search_growth", "refresh_interval", "motion_gate_px"});
    t->num_points = j.value("num_points", t->num_points);
    t->quality_level = j.value("quality_level", t->quality_level);
    t->min_distance = j.value("min_distance", t->min_distance);
    t->ncc_threshold = j.value("ncc_threshold", t->ncc_threshold);
    t->part_ncc_threshold = j.value("part_ncc_threshold", t->part_ncc_threshold);
    t->search_half0 = j.value("search_half0", t->search_half0);
    t->search_growth = j.value("search_growth", t->search_growth);
    t->refresh_interval = j.value("refresh_interval", t->refresh_interval);
    t->motion_gate_px = j.value("motion_gate_px", t->motion_gate_px);
    if (t->num_points < 1) fail(origin, "tracker.num_points must be >= 1");
}

void read_camera(const json& j, const std::string& origin, CameraModel* c) {
    check_keys(j, origin, "camera", {"fov_deg", "sensor_width_mm", "pixel_size_um"});
    c->fov_deg = j.value("fov_deg", c->fov_deg);
    c->sensor_width_mm = j.value("sensor_width_mm", c->sensor_width_mm);
    c->pixel_size_um = j.value("pixel_size_um", c->pixel_size_um);
    if (c->fov_deg <= 0.0 || c->fov_deg >= 180.0) fail(origin, "camera.fov_deg out of (0, 180)");
    if (c->sensor_width_mm <= 0.0 || c->pixel_size_um <= 0.0)
        fail(origin, "camera sensor dimensions must be positive");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("JSON parse error: ") + e.what());
    }
    check_keys(j, origin, "top level",
               {"name", "uas", "vehicle", "duration", "dt", "seed", "program", "bars",
                "vehicle_length", "vehicle_width", "measurement_noise_px", "camera",
                "guidance", "filter", "tracker"});

    Scenario sc;
    sc.name = j.value("name", sc.name);
    if (!j.contains("uas")) fail(origin, "missing \"uas\"");
    if (!j.contains("vehicle")) fail(origin, "missing \"vehicle\"");
    sc.uas = read_entity(j.at("uas"), origin, "uas");
    sc.vehicle = read_entity(j.at("vehicle"), origin, "vehicle");
    if (sc.uas.altitude <= 0.0) fail(origin, "uas.altitude must be positive");
    sc.duration = j.value("duration", sc.duration);
    sc.dt = j.value("dt", sc.dt);
    if (sc.duration <= 0.0) fail(origin, "duration must be > 0");
    if (sc.dt <= 0.0) fail(origin, "dt must be > 0");
    sc.seed = j.value("seed", sc.seed);
    sc.vehicle_length = j.value("vehicle_length", sc.vehicle_length);
    sc.vehicle_width = j.value("vehicle_width", sc.vehicle_width);
    if (sc.vehicle_length <= 0.0 || sc.vehicle_width <= 0.0)
        fail(origin, "vehicle size must be positive");
    sc.measurement_noise_px = j.value("measurement_noise_px", sc.measurement_noise_px);
    if (sc.measurement_noise_px < 0.0) fail(origin, "measurement_noise_px must be >= 0");

    if (j.contains("program")) sc.program = read_program(j.at("program"), origin);
    if (j.contains("bars"))
        for (const auto& b : j.at("bars")) sc.bars.push_back(read_bar(b, origin));
    if (j.contains("camera")) read_camera(j.at("camera"), origin, &sc.camera);
    if (j.contains("guidance")) read_guidance(j.at("guidance"), origin, &sc.guidance);

    sc.camera.altitude_m = sc.uas.altitude;
    sc.filter.dt = sc.dt;
    // Pixel-quantization measurement noise: one ground-sample distance.
    const double gsd = sc.camera.gsd_m();
    sc.filter.r0 = gsd * gsd * Eigen::Matrix2d::Identity();
    if (j.contains("filter")) read_filter(j.at("filter"), origin, &sc.filter);
    if (j.contains("tracker")) read_tracker(j.at("tracker"), origin, &sc.tracker);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("scenario " + path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::unique_ptr<VehicleProgram> make_program(const Scenario& sc, std::uint64_t seed) {
    const ProgramSpec& p = sc.program;
    if (p.type == "lane_change")
        return std::make_unique<LaneChangeProgram>(sc.vehicle.position, sc.vehicle.speed,
                                                   sc.duration, seed, p.lateral,
                                                   p.maneuver_duration, p.min_gap, p.first_after);
    if (p.type == "squircle")
        return std::make_unique<SquircleProgram>(sc.vehicle.position, p.period, p.v_corner,
                                                 p.v_straight);
    if (p.type == "waypoints")
        return std::make_unique<WaypointProgram>(p.waypoints, p.waypoint_speed, p.loop);
    if (p.type == "constant") return std::make_unique<ConstantCommandProgram>(p.constant_cmd);
    throw std::runtime_error("make_program: unknown type " + p.type);
}

std::vector<SceneObject> bar_objects(const Scenario& sc, double t, const Palette& pal) {
    std::vector<SceneObject> out;
    for (const auto& b : sc.bars) {
        SceneObject o;
        o.center = b.center + b.velocity * t;
        o.length = b.length;
        o.width = b.width;
        o.rotation = b.rotation;
        o.color = pal.bar;
        out.push_back(o);
    }
    return out;
}

}  // namespace pursuit
