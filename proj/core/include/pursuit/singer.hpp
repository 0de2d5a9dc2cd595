#pragma once

#include <optional>

#include <Eigen/Dense>

#include "pursuit/entity.hpp"

namespace pursuit {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

// Target state estimate: [x, xdot, xddot, y, ydot, yddot].
struct TargetEstimate {
    Vector6d chi = Vector6d::Zero();
    Matrix6d covariance = Matrix6d::Zero();

    Eigen::Vector2d position() const { return {chi[0], chi[3]}; }
    Eigen::Vector2d velocity() const { return {chi[1], chi[4]}; }
    Eigen::Vector2d acceleration() const { return {chi[2], chi[5]}; }
};

struct FilterConfig {
    double alpha = 0.1;     // 1/s, maneuver bandwidth
    double sigma = 2.0;     // m/s^2, maneuver intensity
    double dt = 1.0 / 30.0;
    Eigen::Matrix2d r0 = Eigen::Matrix2d::Identity();  // base measurement covariance
    double inflation_factor = 5.0;  // per totally-occluded frame
    double inflation_cap = 1e6;     // cap on the cumulative factor
};

// Block-diagonal state transition for the exponentially-correlated
// acceleration model; well defined in the alpha*dt -> 0 limit.
Matrix6d build_transition(const FilterConfig& cfg);

// Closed-form discretized process noise 2*alpha*sigma^2 * blockdiag(Q, Q)
// with Q the transition-weighted integral of the acceleration input.
Matrix6d build_process_noise(const FilterConfig& cfg);

// Outputs consumed by the guidance law.
struct GuidanceEstimates {
    double r = 0.0;
    double theta = 0.0;
    double v_r = 0.0;
    double v_theta = 0.0;
    double a_b = 0.0;      // estimated vehicle acceleration magnitude
    double delta_b = 0.0;  // and its world direction
};

class SingerFilter {
public:
    explicit SingerFilter(const FilterConfig& cfg);

    bool initialized() const { return stage_ >= 2; }

    // Feeds one world-frame position measurement; handles the two-measurement
    // bootstrap internally.
    void measurement_update(const Eigen::Vector2d& z);

    // Coasts one frame under total occlusion: the predicted position is used
    // as a pseudo-measurement with inflated covariance.
    void occlusion_update();

    const TargetEstimate& estimate() const { return est_; }
    const FilterConfig& config() const { return cfg_; }
    int frames_occluded() const { return frames_occluded_; }

    // Low-level steps, exposed for testing and reuse.
    static TargetEstimate predict(const TargetEstimate& est, const Matrix6d& f,
                                  const Matrix6d& q);
    static TargetEstimate update(const TargetEstimate& est, const Eigen::Vector2d& z,
                                 const Eigen::Matrix2d& r, Eigen::Vector2d* innovation = nullptr);

private:
    FilterConfig cfg_;
    Matrix6d f_;
    Matrix6d q_;
    TargetEstimate est_;
    int stage_ = 0;  // 0: no measurement yet, 1: one, 2: running
    Eigen::Vector2d first_z_{0.0, 0.0};
    int frames_occluded_ = 0;
};

// Polar LOS quantities and vehicle acceleration estimates for guidance.
// Throws when the estimated range is zero.
GuidanceEstimates to_guidance_frame(const TargetEstimate& est, const EntityState& uas);

}  // namespace pursuit
