#include "pursuit/singer.hpp"

#include <cmath>
#include <stdexcept>

namespace pursuit {

namespace {

double poly_eval(const double* c, int n, double x) {
    double acc = 0.0;
    for (int i = n - 1; i >= 0; --i) acc = acc * x + c[i];
    return acc;
}

// Position/velocity/acceleration transition block for one axis.
Eigen::Matrix3d transition_block(double alpha, double dt) {
    const double x = alpha * dt;
    Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
    t(0, 1) = dt;
    if (x < 1e-4) {
        // Series keeps the alpha -> 0 (constant-acceleration) limit exact.
        t(0, 2) = dt * dt * (0.5 - x / 6.0 + x * x / 24.0);
        t(1, 2) = dt * (1.0 - x / 2.0 + x * x / 6.0);
    } else {
        t(0, 2) = (x + std::expm1(-x)) / (alpha * alpha);
        t(1, 2) = -std::expm1(-x) / alpha;
    }
    t(2, 2) = std::exp(-x);
    return t;
}

// Discretized Singer covariance block Q = int_0^dt Phi(tau) e3 e3^T Phi(tau)^T dtau.
// Closed forms cancel catastrophically for small alpha*dt, where a truncated
// Taylor series (relative error < 1e-8 at the 0.5 switch point) takes over.
Eigen::Matrix3d noise_block(double alpha, double dt) {
    const double x = alpha * dt;
    Eigen::Matrix3d q;
    if (x < 0.5) {
        static const double c00[] = {1089728640., -605404800., 216216000., -60540480.,
                                     14294280.,   -2954952.,   547092.,    -92092.,
                                     14245.,      -2041.};
        static const double c01[] = {59875200., -39916800., 16632000., -5322240., 1413720.,
                                     -324720.,  66132.,     -12144.,   2035.,     -314.};
        static const double c02[] = {19958400., -19958400., 10977120., -4324320., 1354320.,
                                     -356400.,  81510.,     -16566.,   3039.,     -509.};
        static const double c11[] = {26611200., -19958400., 9313920., -3326400., 982080.,
                                     -249480.,  55880.,     -11220.,  2044.,     -341.};
        static const double c12[] = {1814400., -1814400., 1058400., -453600., 156240.,
                                     -45360.,  11430.,    -2550.,   511.,     -93.};
        static const double c22[] = {14175., -14175., 9450., -4725., 1890.,
                                     -630.,  180.,    -45.,  10.,    -2.};
        const double t2 = dt * dt, t3 = t2 * dt;
        q(0, 0) = t3 * t2 * poly_eval(c00, 10, x) / 21794572800.0;
        q(0, 1) = t2 * t2 * poly_eval(c01, 10, x) / 479001600.0;
        q(0, 2) = t3 * poly_eval(c02, 10, x) / 119750400.0;
        q(1, 1) = t3 * poly_eval(c11, 10, x) / 79833600.0;
        q(1, 2) = t2 * poly_eval(c12, 10, x) / 3628800.0;
        q(2, 2) = dt * poly_eval(c22, 10, x) / 14175.0;
    } else {
        const double a = alpha;
        const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
        const double em = std::exp(-x), em2 = std::exp(-2.0 * x);
        q(0, 0) = dt * dt * dt / (3.0 * a2) - dt * dt / a3 + dt / a4 - 2.0 * dt * em / a4 +
                  (1.0 - em2) / (2.0 * a5);
        q(0, 1) = dt * dt / (2.0 * a2) - dt / a3 + dt * em / a3 + (1.0 - 2.0 * em + em2) / (2.0 * a4);
        q(0, 2) = (1.0 - em2 - 2.0 * x * em) / (2.0 * a3);
        q(1, 1) = dt / a2 + (-3.0 + 4.0 * em - em2) / (2.0 * a3);
        q(1, 2) = (1.0 - em) * (1.0 - em) / (2.0 * a2);
        q(2, 2) = (1.0 - em2) / (2.0 * a);
    }
    q(1, 0) = q(0, 1);
    q(2, 0) = q(0, 2);
    q(2, 1) = q(1, 2);
    return q;
}

const Eigen::Matrix<double, 2, 6> kH = [] {
    Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
    h(0, 0) = 1.0;
    h(1, 3) = 1.0;
    return h;
}();

}  // namespace

Matrix6d build_transition(const FilterConfig& cfg) {
    if (cfg.alpha <= 0.0 || cfg.dt <= 0.0)
        throw std::invalid_argument("build_transition: alpha and dt must be positive");
    const Eigen::Matrix3d t = transition_block(cfg.alpha, cfg.dt);
    Matrix6d f = Matrix6d::Zero();
    f.block<3, 3>(0, 0) = t;
    f.block<3, 3>(3, 3) = t;
    return f;
}

Matrix6d build_process_noise(const FilterConfig& cfg) {
    if (cfg.alpha <= 0.0 || cfg.dt <= 0.0)
        throw std::invalid_argument("build_process_noise: alpha and dt must be positive");
    const Eigen::Matrix3d q = noise_block(cfg.alpha, cfg.dt);
    Matrix6d out = Matrix6d::Zero();
    const double scale = 2.0 * cfg.alpha * cfg.sigma * cfg.sigma;
    out.block<3, 3>(0, 0) = scale * q;
    out.block<3, 3>(3, 3) = scale * q;
    return out;
}

SingerFilter::SingerFilter(const FilterConfig& cfg)
    : cfg_(cfg), f_(build_transition(cfg)), q_(build_process_noise(cfg)) {}

TargetEstimate SingerFilter::predict(const TargetEstimate& est, const Matrix6d& f,
                                     const Matrix6d& q) {
    TargetEstimate out;
    out.chi = f * est.chi;
    out.covariance = f * est.covariance * f.transpose() + q;
    return out;
}

TargetEstimate SingerFilter::update(const TargetEstimate& est, const Eigen::Vector2d& z,
                                    const Eigen::Matrix2d& r, Eigen::Vector2d* innovation) {
    const Eigen::Matrix2d s = kH * est.covariance * kH.transpose() + r;
    const Eigen::LLT<Eigen::Matrix2d> llt(s);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("SingerFilter::update: innovation covariance not PSD");
    const Eigen::Vector2d nu = z - kH * est.chi;
    if (innovation) *innovation = nu;
    const Eigen::Matrix<double, 6, 2> k =
        est.covariance * kH.transpose() * llt.solve(Eigen::Matrix2d::Identity());
    TargetEstimate out;
    out.chi = est.chi + k * nu;
    // Joseph form keeps the covariance symmetric PSD.
    const Matrix6d ikh = Matrix6d::Identity() - k * kH;
    out.covariance = ikh * est.covariance * ikh.transpose() + k * r * k.transpose();
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    return out;
}

void SingerFilter::measurement_update(const Eigen::Vector2d& z) {
    frames_occluded_ = 0;
    if (stage_ == 0) {
        first_z_ = z;
        est_.chi.setZero();
        est_.chi[0] = z.x();
        est_.chi[3] = z.y();
        stage_ = 1;
        return;
    }
    if (stage_ == 1) {
        const Eigen::Vector2d v = (z - first_z_) / cfg_.dt;
        est_.chi << z.x(), v.x(), 0.0, z.y(), v.y(), 0.0;
        const double pr = cfg_.r0(0, 0);
        Vector6d d;
        d << pr, 2.0 * pr / (cfg_.dt * cfg_.dt), 9.0 * cfg_.sigma * cfg_.sigma,
             pr, 2.0 * pr / (cfg_.dt * cfg_.dt), 9.0 * cfg_.sigma * cfg_.sigma;
        est_.covariance = d.asDiagonal();
        stage_ = 2;
        return;
    }
    est_ = update(predict(est_, f_, q_), z, cfg_.r0);
}

void SingerFilter::occlusion_update() {
    if (stage_ < 2) return;  // nothing to coast yet
    const TargetEstimate pred = predict(est_, f_, q_);
    const double factor =
        std::min(std::pow(cfg_.inflation_factor, frames_occluded_ + 1), cfg_.inflation_cap);
    const Eigen::Vector2d zhat = kH * pred.chi;
    est_ = update(pred, zhat, Eigen::Matrix2d(cfg_.r0 * factor));
    ++frames_occluded_;
}

GuidanceEstimates to_guidance_frame(const TargetEstimate& est, const EntityState& uas) {
    const Eigen::Vector2d d = est.position() - uas.position;
    const double r = d.norm();
    if (r <= 0.0) throw std::invalid_argument("to_guidance_frame: zero range");
    GuidanceEstimates g;
    g.r = r;
    g.theta = std::atan2(d.y(), d.x());
    const Eigen::Vector2d u_los{std::cos(g.theta), std::sin(g.theta)};
    const Eigen::Vector2d u_perp{-std::sin(g.theta), std::cos(g.theta)};
    const Eigen::Vector2d vrel = est.velocity() - uas.velocity();
    g.v_r = vrel.dot(u_los);
    g.v_theta = vrel.dot(u_perp);
    const Eigen::Vector2d acc = est.acceleration();
    g.a_b = acc.norm();
    g.delta_b = (g.a_b < 1e-3) ? 0.0 : std::atan2(acc.y(), acc.x());
    if (g.a_b < 1e-3) g.a_b = 0.0;
    return g;
}

}  // namespace pursuit
