#include "pursuit/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "pursuit/png.hpp"
#include "pursuit/rng.hpp"

namespace pursuit {

const std::vector<std::string>& run_log_columns() {
    static const std::vector<std::string> cols = {
        "t",          "frame",       "uas_x",      "uas_y",        "uas_speed",
        "uas_heading", "veh_x",      "veh_y",      "veh_speed",    "veh_heading",
        "veh_ab",     "veh_deltab",  "r",          "theta",        "vr",
        "vtheta",     "y1",          "y2",         "e1",           "e2",
        "meas_valid", "meas_x",      "meas_y",     "meas_px_x",    "meas_px_y",
        "est_x",      "est_y",       "est_vx",     "est_vy",       "est_ax",
        "est_ay",     "est_r",       "est_theta",  "est_vr",       "est_vtheta",
        "est_ab",     "est_deltab",  "est_y1",     "est_y2",       "a_lat",
        "a_long",     "a_lat_raw",   "a_long_raw", "saturated",    "regularized",
        "speed_clamped", "occlusion", "transition_case", "transition_subcase",
        "good_count", "redetected",  "in_fov"};
    return cols;
}

namespace {

int subcase_number(char c) { return c == '\0' ? 0 : c - 'a' + 1; }

Frame render_world(const Scenario& sc, const EntityState& uas, const EntityState& vehicle,
                   double t, int frame_index, const Palette& pal) {
    std::vector<SceneObject> scene = vehicle_objects(vehicle, sc.vehicle_length,
                                                     sc.vehicle_width, pal);
    const std::vector<SceneObject> bars = bar_objects(sc, t, pal);
    scene.insert(scene.end(), bars.begin(), bars.end());
    CameraModel cam = sc.camera;
    cam.altitude_m = uas.altitude;
    return rasterize(scene, cam, uas.position, pal.ground, t, frame_index);
}

RoiRect vehicle_roi(const Scenario& sc, const EntityState& uas, const EntityState& vehicle) {
    CameraModel cam = sc.camera;
    cam.altitude_m = uas.altitude;
    const double c = std::cos(vehicle.heading), s = std::sin(vehicle.heading);
    const double hl = sc.vehicle_length / 2.0, hw = sc.vehicle_width / 2.0;
    double x0 = 1e18, y0 = 1e18, x1 = -1e18, y1 = -1e18;
    for (const double su : {-1.0, 1.0})
        for (const double sv : {-1.0, 1.0}) {
            const Eigen::Vector2d corner =
                vehicle.position + Eigen::Vector2d(su * hl * c - sv * hw * s,
                                                   su * hl * s + sv * hw * c);
            const Eigen::Vector2d px = project(cam, uas.position, corner).px;
            x0 = std::min(x0, px.x());
            y0 = std::min(y0, px.y());
            x1 = std::max(x1, px.x());
            y1 = std::max(y1, px.y());
        }
    const int margin = 3;
    RoiRect roi{static_cast<int>(std::floor(x0)) - margin, static_cast<int>(std::floor(y0)) - margin,
                static_cast<int>(std::ceil(x1)) + margin, static_cast<int>(std::ceil(y1)) + margin};
    roi.x0 = std::max(roi.x0, 0);
    roi.y0 = std::max(roi.y0, 0);
    roi.x1 = std::min(roi.x1, cam.width_px());
    roi.y1 = std::min(roi.y1, cam.height_px());
    return roi;
}

}  // namespace

CsvTable run(const RunConfig& cfg) {
    const Scenario& sc = cfg.scenario;
    const bool vision = cfg.mode == RunMode::Vision;

    EntityState uas = sc.uas;
    EntityState vehicle = sc.vehicle;
    const std::unique_ptr<VehicleProgram> program = make_program(sc, cfg.seed);

    CameraModel cam = sc.camera;
    cam.altitude_m = uas.altitude;
    const Palette pal;

    FilterConfig fcfg = sc.filter;
    fcfg.dt = sc.dt;
    SingerFilter filter(fcfg);
    Tracker tracker(sc.tracker);
    Rng noise_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    const int steps = std::max(1, static_cast<int>(std::llround(sc.duration / sc.dt)));
    CsvTable log;
    log.columns = run_log_columns();
    log.rows.reserve(size_t(steps));

    std::string frames_dir;
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        if (cfg.dump_frames && vision) {
            frames_dir = cfg.out_dir + "/frames";
            std::filesystem::create_directories(frames_dir);
        }
    }

    Frame prev_frame;
    SignHints sign_hints;
    for (int k = 0; k < steps; ++k) {
        const double t = k * sc.dt;
        cam.altitude_m = uas.altitude;

        // Vehicle command applied over [t, t+dt]; also the guidance law's true
        // (a_B, delta_B) for this frame.
        const VehicleCommand veh_cmd = program->command(t, vehicle);
        const RelativeState rel = relative_state(uas, vehicle);
        const Objectives truth_obj = compute_objectives(rel, sc.guidance.radius, sc.guidance.y1d);

        bool meas_valid = false;
        Eigen::Vector2d meas_world{0.0, 0.0}, meas_px{0.0, 0.0};
        TrackStepInfo tinfo;

        if (vision) {
            Frame frame = render_world(sc, uas, vehicle, t, k, pal);
            if (!frames_dir.empty()) {
                char name[64];
                std::snprintf(name, sizeof(name), "/frame_%06d.png", k);
                write_png_gray(frame.image, frames_dir + name);
            }
            std::optional<Eigen::Vector2d> centroid_px;
            if (k == 0) {
                tracker.init(frame, vehicle_roi(sc, uas, vehicle));
                centroid_px = tracker.info().adjusted_centroid;
            } else {
                centroid_px = tracker.track_step(prev_frame, frame);
            }
            tinfo = tracker.info();
            if (centroid_px) {
                meas_px = *centroid_px;
                if (sc.measurement_noise_px > 0.0) {
                    meas_px.x() += sc.measurement_noise_px * noise_rng.gaussian();
                    meas_px.y() += sc.measurement_noise_px * noise_rng.gaussian();
                }
                meas_world = unproject_px(cam, uas.position, meas_px);
                meas_valid = true;
                filter.measurement_update(meas_world);
            } else {
                filter.occlusion_update();
            }
            prev_frame = std::move(frame);
        }

        // Guidance inputs: estimates in vision mode, exact states in truth mode.
        GuidanceEstimates g;
        bool have_guidance = false;
        if (vision) {
            if (filter.initialized()) {
                g = to_guidance_frame(filter.estimate(), uas);
                have_guidance = true;
            }
        } else {
            g = {rel.r, rel.theta, rel.v_r, rel.v_theta, veh_cmd.a_b, veh_cmd.delta_b};
            have_guidance = true;
        }

        CommandResult cmd;  // zero commands until the filter bootstraps
        Objectives est_obj;
        if (have_guidance) {
            est_obj = compute_objectives(as_relative(g), sc.guidance.radius, sc.guidance.y1d);
            cmd = compute_commands(as_relative(g), g.a_b, g.delta_b, uas.heading, sc.guidance,
                                   sign_hints);
            if (std::abs(g.v_r) >= sc.guidance.epsilon_v)
                sign_hints.v_r = g.v_r < 0.0 ? -1 : 1;
            if (std::abs(g.v_theta) >= sc.guidance.epsilon_v)
                sign_hints.v_theta = g.v_theta < 0.0 ? -1 : 1;
        }

        // Logged estimate: filter state in vision mode, truth in truth mode
        // (the log stays schema-complete either way).
        Eigen::Vector2d est_p = vehicle.position, est_v = vehicle.velocity();
        Eigen::Vector2d est_a{veh_cmd.a_b * std::cos(veh_cmd.delta_b),
                              veh_cmd.a_b * std::sin(veh_cmd.delta_b)};
        GuidanceEstimates eg = g;
        if (vision) {
            const TargetEstimate& est = filter.estimate();
            est_p = est.position();
            est_v = est.velocity();
            est_a = est.acceleration();
            if (!have_guidance) {
                eg = GuidanceEstimates{};
                if ((est_p - uas.position).norm() > 0.0) eg = to_guidance_frame(est, uas);
                est_obj = compute_objectives(as_relative(eg), sc.guidance.radius, sc.guidance.y1d);
            }
        }

        const Eigen::Vector2d veh_px = project(cam, uas.position, vehicle.position).px;
        const bool in_fov = veh_px.x() >= 0.0 && veh_px.y() >= 0.0 &&
                            veh_px.x() < cam.width_px() && veh_px.y() < cam.height_px();

        bool speed_clamped = false;
        const EntityState next_uas = step_uas(uas, cmd.cmd, sc.dt, &speed_clamped);
        bool veh_clamped = false;
        const EntityState next_vehicle = step_vehicle(vehicle, veh_cmd, sc.dt, &veh_clamped);

        log.rows.push_back({t,
                            static_cast<double>(k),
                            uas.position.x(),
                            uas.position.y(),
                            uas.speed,
                            uas.heading,
                            vehicle.position.x(),
                            vehicle.position.y(),
                            vehicle.speed,
                            vehicle.heading,
                            veh_cmd.a_b,
                            veh_cmd.delta_b,
                            rel.r,
                            rel.theta,
                            rel.v_r,
                            rel.v_theta,
                            truth_obj.y1,
                            truth_obj.y2,
                            truth_obj.e1,
                            truth_obj.e2,
                            meas_valid ? 1.0 : 0.0,
                            meas_world.x(),
                            meas_world.y(),
                            meas_px.x(),
                            meas_px.y(),
                            est_p.x(),
                            est_p.y(),
                            est_v.x(),
                            est_v.y(),
                            est_a.x(),
                            est_a.y(),
                            eg.r,
                            eg.theta,
                            eg.v_r,
                            eg.v_theta,
                            eg.a_b,
                            eg.delta_b,
                            est_obj.y1,
                            est_obj.y2,
                            cmd.cmd.a_lat,
                            cmd.cmd.a_long,
                            cmd.raw.a_lat,
                            cmd.raw.a_long,
                            cmd.saturated ? 1.0 : 0.0,
                            cmd.regularized ? 1.0 : 0.0,
                            speed_clamped ? 1.0 : 0.0,
                            vision ? static_cast<double>(static_cast<int>(tinfo.state)) : 0.0,
                            static_cast<double>(tinfo.transition.index),
                            static_cast<double>(subcase_number(tinfo.transition.subcase)),
                            static_cast<double>(tinfo.good_count),
                            tinfo.redetected ? 1.0 : 0.0,
                            in_fov ? 1.0 : 0.0});

        uas = next_uas;
        vehicle = next_vehicle;
    }

    if (!cfg.out_dir.empty()) write_csv(log, cfg.out_dir + "/run.csv");
    return log;
}

}  // namespace pursuit
