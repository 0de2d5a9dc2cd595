#pragma once

#include <Eigen/Core>

namespace pursuit {

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// Planar point-mass state of one agent. Altitude is only meaningful for the
// UAS and stays constant over a run.
struct EntityState {
    Eigen::Vector2d position{0.0, 0.0};  // m, world frame
    double speed = 0.0;                  // m/s, >= 0
    double heading = 0.0;                // rad, in (-pi, pi]
    double altitude = 0.0;               // m, >= 0

    Eigen::Vector2d velocity() const {
        return {speed * std::cos(heading), speed * std::sin(heading)};
    }
};

struct UasCommand {
    double a_lat = 0.0;   // m/s^2, rotates the velocity vector
    double a_long = 0.0;  // m/s^2, changes speed
};

struct VehicleCommand {
    double a_b = 0.0;      // m/s^2, magnitude >= 0
    double delta_b = 0.0;  // rad, world-frame direction of the acceleration
};

// LOS range/angle and the relative velocity split along/across the LOS.
struct RelativeState {
    double r = 0.0;        // m, >= 0
    double theta = 0.0;    // rad
    double v_r = 0.0;      // m/s, range rate
    double v_theta = 0.0;  // m/s, r * thetadot
};

// Speed floor keeping heading-rate terms (a_lat / V) finite.
inline constexpr double kSpeedFloor = 0.1;  // m/s

// Fixed-step RK4 advance of the UAS state under (a_lat, a_long).
// If the speed would cross the floor it is clamped there and *clamped is set.
EntityState step_uas(const EntityState& state, const UasCommand& cmd, double dt,
                     bool* clamped = nullptr);

// Fixed-step RK4 advance of the vehicle state under an acceleration of
// magnitude a_b acting at world angle delta_b.
EntityState step_vehicle(const EntityState& state, const VehicleCommand& cmd, double dt,
                         bool* clamped = nullptr);

// Exact relative state between the UAS and the vehicle.
// Throws std::invalid_argument when the planar positions coincide.
RelativeState relative_state(const EntityState& uas, const EntityState& vehicle);

}  // namespace pursuit
