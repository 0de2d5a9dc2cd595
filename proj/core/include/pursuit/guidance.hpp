#pragma once

#include <vector>

#include "pursuit/entity.hpp"
#include "pursuit/singer.hpp"

namespace pursuit {

struct GuidanceConfig {
    double k1 = 0.5;          // 1/s, cone objective gain
    double k2 = 0.05;         // 1/s, velocity-matching gain
    double y1d = -2500.0;     // m^4/s^2, constant cone reference (< 0)
    double radius = 10.0;     // m, vehicle radius R
    double a_lat_max = 10.0;  // m/s^2
    double a_long_max = 10.0;
    double epsilon_v = 0.1;   // m/s, denominator regularization floor
};

// y1: rendezvous-cone objective; y2: velocity matching objective.
struct Objectives {
    double y1 = 0.0;
    double y2 = 0.0;
    double e1 = 0.0;  // y1d - y1
    double e2 = 0.0;  // -y2
};

Objectives compute_objectives(const RelativeState& rel, double radius, double y1d);

enum class ConeRegion { Inside, Boundary, Outside };

// Inside: y1 < 0 and V_r < 0. Boundary: |y1| <= tol and V_r < 0 (grazing).
ConeRegion cone_membership(const RelativeState& rel, double radius, double tol = 1e-9);

struct CommandResult {
    UasCommand cmd;            // after saturation
    UasCommand raw;            // closed-form values before saturation
    bool saturated = false;
    bool regularized = false;  // denominator floored
};

// Last confidently-observed signs of V_r / V_theta (+1, -1, or 0 = unknown).
// Used only when the respective magnitude is inside the regularization floor,
// so noise near the singular set cannot flip the command signs frame to frame.
struct SignHints {
    int v_r = 0;
    int v_theta = 0;
};

// Closed-form dynamic-inversion acceleration commands. alpha is the UAS
// heading; a_b / delta_b describe the vehicle acceleration (true or
// estimated). Never returns NaN/Inf: near-singular denominators are
// regularized by flooring |V_r| and |V_theta| (sign preserving, with optional
// hysteresis via hints).
CommandResult compute_commands(const RelativeState& rel, double a_b, double delta_b,
                               double alpha, const GuidanceConfig& cfg,
                               const SignHints& hints = {});

inline RelativeState as_relative(const GuidanceEstimates& g) {
    return {g.r, g.theta, g.v_r, g.v_theta};
}

// Independent verification path: numerically solves the 2x2 system the closed
// forms were derived from. Throws on a singular / ill-conditioned matrix.
UasCommand solve_commands_linear(const RelativeState& rel, double a_b, double delta_b,
                                 double alpha, const GuidanceConfig& cfg);

// Reporting helper: checks that logged objective errors stay inside the
// prescribed exponential decay envelopes. Samples after the first
// saturation/regularization event are excluded (the inversion is exact only
// while the commands are unmodified).
struct ErrorDynamicsReport {
    bool e1_ok = false;
    bool e2_ok = false;
    double max_e1_violation = 0.0;  // worst |e|/envelope ratio
    double max_e2_violation = 0.0;
    int samples_checked = 0;
};

ErrorDynamicsReport error_dynamics_check(const std::vector<double>& t,
                                         const std::vector<double>& e1,
                                         const std::vector<double>& e2,
                                         const std::vector<bool>& flagged,
                                         const GuidanceConfig& cfg, double tol = 0.05,
                                         double floor_frac = 1e-6);

}  // namespace pursuit
