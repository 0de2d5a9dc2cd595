#pragma once

#include <memory>
#include <vector>

#include "pursuit/entity.hpp"

namespace pursuit {

// Reference trajectory sample a program asks the vehicle to follow.
struct ReferenceSample {
    Eigen::Vector2d position{0.0, 0.0};
    Eigen::Vector2d velocity{0.0, 0.0};
    Eigen::Vector2d acceleration{0.0, 0.0};
};

// Scripted vehicle maneuver source. Programs are pure in (t, state): the
// same query sequence yields the same commands.
class VehicleProgram {
public:
    virtual ~VehicleProgram() = default;
    virtual ReferenceSample reference(double t) const = 0;

    // Feedforward + proportional tracking of the reference, expressed as the
    // vehicle's (a_B, delta_B) acceleration command.
    virtual VehicleCommand command(double t, const EntityState& state) const;

    // Tracking gains: acceleration = a_ref + kv (v_ref - v) + kp (p_ref - p).
    double kv = 1.0;
    double kp = 0.25;
};

// Eastbound cruise with smooth 4 m lateral displacements at seed-determined
// instants, alternating direction.
class LaneChangeProgram : public VehicleProgram {
public:
    LaneChangeProgram(const Eigen::Vector2d& start, double cruise_speed, double duration,
                      std::uint64_t seed, double lateral = 4.0, double maneuver_duration = 4.0,
                      double min_gap = 20.0, double first_after = 8.0);

    ReferenceSample reference(double t) const override;
    const std::vector<double>& maneuver_times() const { return times_; }

private:
    Eigen::Vector2d start_;
    double speed_;
    double lateral_;
    double maneuver_duration_;
    std::vector<double> times_;
    std::vector<double> dirs_;
};

// Superellipse |x/s|^4 + |y/s|^4 = s-normalized squircle, traversed with a
// curvature-shaped speed profile (slow at the corners, fast on the straights)
// and a side half-length calibrated so one lap takes exactly `period`.
class SquircleProgram : public VehicleProgram {
public:
    SquircleProgram(const Eigen::Vector2d& start_point, double period = 360.0,
                    double v_corner = 14.79, double v_straight = 22.63);

    ReferenceSample reference(double t) const override;
    double side_half_length() const { return side_; }
    double period() const { return period_; }

private:
    double angle_at(double t) const;  // polar parameter as a function of time

    Eigen::Vector2d center_{0.0, 0.0};
    double period_;
    double v_corner_;
    double v_straight_;
    double side_ = 0.0;
    double phase0_ = -M_PI / 2.0;       // start at the bottom mid-side, heading east
    std::vector<double> angle_table_;   // theta(t) samples over one lap
};

// Piecewise-linear waypoint following at constant speed per leg.
class WaypointProgram : public VehicleProgram {
public:
    WaypointProgram(std::vector<Eigen::Vector2d> waypoints, double speed, bool loop = false);
    ReferenceSample reference(double t) const override;

private:
    std::vector<Eigen::Vector2d> wps_;
    std::vector<double> leg_start_;  // cumulative start time per leg
    double speed_;
    bool loop_;
    double total_ = 0.0;
};

// Fixed command source (open loop), handy for scripted tests.
class ConstantCommandProgram : public VehicleProgram {
public:
    explicit ConstantCommandProgram(VehicleCommand cmd) : cmd_(cmd) {}
    ReferenceSample reference(double) const override { return {}; }
    VehicleCommand command(double, const EntityState&) const override { return cmd_; }

private:
    VehicleCommand cmd_;
};

}  // namespace pursuit
