#include "pursuit/guidance.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace pursuit {

Objectives compute_objectives(const RelativeState& rel, double radius, double y1d) {
    Objectives o;
    const double r2 = rel.r * rel.r, rr2 = radius * radius;
    const double vt2 = rel.v_theta * rel.v_theta, vr2 = rel.v_r * rel.v_r;
    o.y1 = r2 * vt2 - rr2 * (vt2 + vr2);
    o.y2 = vt2 + vr2;
    o.e1 = y1d - o.y1;
    o.e2 = -o.y2;
    return o;
}

ConeRegion cone_membership(const RelativeState& rel, double radius, double tol) {
    const Objectives o = compute_objectives(rel, radius, 0.0);
    if (rel.v_r < 0.0) {
        if (std::abs(o.y1) <= tol) return ConeRegion::Boundary;
        if (o.y1 < 0.0) return ConeRegion::Inside;
    }
    return ConeRegion::Outside;
}

namespace {

// Sign-preserving floor. Inside the floor the measured sign is noise, so a
// nonzero hint (the last confidently-observed sign) wins; otherwise zero is
// treated as positive.
double floored(double v, double eps, int hint, bool* changed) {
    if (std::abs(v) >= eps) return v;
    *changed = true;
    if (hint != 0) return hint < 0 ? -eps : eps;
    return v < 0.0 ? -eps : eps;
}

}  // namespace

CommandResult compute_commands(const RelativeState& rel, double a_b, double delta_b,
                               double alpha, const GuidanceConfig& cfg,
                               const SignHints& hints) {
    CommandResult out;

    const double r = std::max(rel.r, cfg.epsilon_v);
    bool reg = rel.r < cfg.epsilon_v;
    const double vr = floored(rel.v_r, cfg.epsilon_v, hints.v_r, &reg);
    const double vt = floored(rel.v_theta, cfg.epsilon_v, hints.v_theta, &reg);
    out.regularized = reg;

    const double r2 = r * r, rr2 = cfg.radius * cfg.radius;
    const double y1 = r2 * vt * vt - rr2 * (vt * vt + vr * vr);
    const double y2 = vr * vr + vt * vt;
    const double c = std::cos(alpha - rel.theta), s = std::sin(alpha - rel.theta);
    const double den = 2.0 * vr * vt * r2;

    const double a_lat = (cfg.k1 * (y1 - cfg.y1d) * (vr * c + vt * s) +
                          cfg.k2 * y2 * (vr * rr2 * c - vt * (r2 - rr2) * s) -
                          den * std::sin(alpha - delta_b) * a_b) /
                         den;
    const double a_long = (cfg.k1 * (y1 - cfg.y1d) * (vr * s - vt * c) +
                           cfg.k2 * y2 * (vr * rr2 * s + vt * (r2 - rr2) * c) +
                           den * std::cos(alpha - delta_b) * a_b) /
                          den;

    out.raw = {a_lat, a_long};
    out.cmd.a_lat = std::clamp(a_lat, -cfg.a_lat_max, cfg.a_lat_max);
    out.cmd.a_long = std::clamp(a_long, -cfg.a_long_max, cfg.a_long_max);
    out.saturated = out.cmd.a_lat != a_lat || out.cmd.a_long != a_long;
    return out;
}

UasCommand solve_commands_linear(const RelativeState& rel, double a_b, double delta_b,
                                 double alpha, const GuidanceConfig& cfg) {
    const double r2 = rel.r * rel.r, rr2 = cfg.radius * cfg.radius;
    const double vr = rel.v_r, vt = rel.v_theta;
    const double y1 = r2 * vt * vt - rr2 * (vt * vt + vr * vr);
    const double y2 = vr * vr + vt * vt;
    const double c = std::cos(alpha - rel.theta), s = std::sin(alpha - rel.theta);
    const double cd = std::cos(delta_b - rel.theta), sd = std::sin(delta_b - rel.theta);

    Eigen::Matrix2d a;
    a << vt * (r2 - rr2) * c + rr2 * vr * s, vt * (r2 - rr2) * s - rr2 * vr * c,
         vt * c - vr * s,                    vt * s + vr * c;
    const double b1 = vr * rr2 * cd - vt * (r2 - rr2) * sd;
    const double b2 = -vr * cd - vt * sd;
    Eigen::Vector2d rhs{-cfg.k1 * (cfg.y1d - y1) / 2.0 - b1 * a_b,
                        cfg.k2 * y2 / 2.0 - b2 * a_b};

    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues()(1), smax = svd.singularValues()(0);
    if (smin <= 0.0 || smax / smin > 1e12)
        throw std::runtime_error("solve_commands_linear: inversion singularity");
    const Eigen::Vector2d u = svd.solve(rhs);
    return {u[0], u[1]};
}

ErrorDynamicsReport error_dynamics_check(const std::vector<double>& t,
                                         const std::vector<double>& e1,
                                         const std::vector<double>& e2,
                                         const std::vector<bool>& flagged,
                                         const GuidanceConfig& cfg, double tol,
                                         double floor_frac) {
    ErrorDynamicsReport rep;
    if (t.empty() || t.size() != e1.size() || t.size() != e2.size() ||
        t.size() != flagged.size())
        return rep;
    const double e1_0 = std::abs(e1.front());
    const double e2_0 = std::abs(e2.front());
    rep.e1_ok = rep.e2_ok = true;
    for (size_t i = 0; i < t.size(); ++i) {
        if (flagged[i]) break;  // inversion no longer exact past this point
        const double dt = t[i] - t.front();
        const double env1 = (1.0 + tol) * e1_0 * std::exp(-cfg.k1 * dt) + floor_frac * e1_0;
        const double env2 = (1.0 + tol) * e2_0 * std::exp(-cfg.k2 * dt) + floor_frac * e2_0;
        rep.max_e1_violation = std::max(rep.max_e1_violation, std::abs(e1[i]) / env1);
        rep.max_e2_violation = std::max(rep.max_e2_violation, std::abs(e2[i]) / env2);
        ++rep.samples_checked;
    }
    rep.e1_ok = rep.max_e1_violation <= 1.0;
    rep.e2_ok = rep.max_e2_violation <= 1.0;
    return rep;
}

}  // namespace pursuit
