#include "pursuit/programs.hpp"

#include <cmath>
#include <stdexcept>

#include "pursuit/rng.hpp"

namespace pursuit {

VehicleCommand VehicleProgram::command(double t, const EntityState& state) const {
    const ReferenceSample ref = reference(t);
    const Eigen::Vector2d a = ref.acceleration + kv * (ref.velocity - state.velocity()) +
                              kp * (ref.position - state.position);
    VehicleCommand cmd;
    cmd.a_b = a.norm();
    cmd.delta_b = cmd.a_b > 1e-9 ? std::atan2(a.y(), a.x()) : state.heading;
    if (cmd.a_b <= 1e-9) cmd.a_b = 0.0;
    return cmd;
}

// ---------------------------------------------------------------------------
// Lane change

namespace {

// Quintic smoothstep and derivatives; zero velocity/acceleration at both ends.
double smooth5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smooth5_d(double u) { return u * u * (30.0 + u * (-60.0 + 30.0 * u)); }
double smooth5_dd(double u) { return u * (60.0 + u * (-180.0 + 120.0 * u)); }

}  // namespace

LaneChangeProgram::LaneChangeProgram(const Eigen::Vector2d& start, double cruise_speed,
                                     double duration, std::uint64_t seed, double lateral,
                                     double maneuver_duration, double min_gap,
                                     double first_after)
    : start_(start), speed_(cruise_speed), lateral_(lateral),
      maneuver_duration_(maneuver_duration) {
    Rng rng(seed);
    double t = first_after + rng.uniform(0.0, min_gap);
    double dir = 1.0;
    while (t + maneuver_duration < duration) {
        times_.push_back(t);
        dirs_.push_back(dir);
        dir = -dir;
        t += maneuver_duration + min_gap + rng.uniform(0.0, min_gap);
    }
}

ReferenceSample LaneChangeProgram::reference(double t) const {
    ReferenceSample s;
    s.position = start_ + Eigen::Vector2d(speed_ * t, 0.0);
    s.velocity = {speed_, 0.0};
    for (size_t i = 0; i < times_.size(); ++i) {
        const double u = (t - times_[i]) / maneuver_duration_;
        if (u <= 0.0) break;
        if (u >= 1.0) {
            s.position.y() += dirs_[i] * lateral_;
            continue;
        }
        s.position.y() += dirs_[i] * lateral_ * smooth5(u);
        s.velocity.y() += dirs_[i] * lateral_ * smooth5_d(u) / maneuver_duration_;
        s.acceleration.y() +=
            dirs_[i] * lateral_ * smooth5_dd(u) / (maneuver_duration_ * maneuver_duration_);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Squircle

namespace {

// |x|^4 + |y|^4 = s^4 in polar form: radius(theta) = s * f(theta)^(-1/4).
double squircle_f(double th) {
    const double c = std::cos(th), s = std::sin(th);
    return c * c * c * c + s * s * s * s;
}

double squircle_radius(double s, double th) { return s * std::pow(squircle_f(th), -0.25); }

double squircle_radius_d(double s, double th) {
    return 0.25 * s * std::pow(squircle_f(th), -1.25) * std::sin(4.0 * th);
}

// |dp/dtheta| per unit side length.
double arc_rate_unit(double th) {
    const double r = squircle_radius(1.0, th);
    const double rd = squircle_radius_d(1.0, th);
    return std::sqrt(r * r + rd * rd);
}

}  // namespace

SquircleProgram::SquircleProgram(const Eigen::Vector2d& start_point, double period,
                                 double v_corner, double v_straight)
    : period_(period), v_corner_(v_corner), v_straight_(v_straight) {
    // Speed profile: fast mid-side, slow at the corners.
    auto v_of = [&](double th) {
        const double c2 = std::cos(2.0 * th);
        return v_corner_ + (v_straight_ - v_corner_) * c2 * c2;
    };

    // Lap time scales linearly with the side length; calibrate it so one lap
    // takes exactly `period`.
    const int nq = 8192;
    double integral = 0.0;
    for (int i = 0; i < nq; ++i) {
        const double th = (i + 0.5) * 2.0 * M_PI / nq;
        integral += arc_rate_unit(th) / v_of(th) * (2.0 * M_PI / nq);
    }
    side_ = period_ / integral;

    center_ = start_point - Eigen::Vector2d(squircle_radius(side_, phase0_) * std::cos(phase0_),
                                            squircle_radius(side_, phase0_) * std::sin(phase0_));

    // theta(t) over one lap, fine fixed-step RK4 on dtheta/dt = v / |dp/dtheta|.
    const int steps = 36000;
    const double h = period_ / steps;
    angle_table_.resize(size_t(steps) + 1);
    double th = phase0_;
    auto rate = [&](double a) { return v_of(a) / (side_ * arc_rate_unit(a)); };
    for (int i = 0; i <= steps; ++i) {
        angle_table_[size_t(i)] = th;
        const double k1 = rate(th);
        const double k2 = rate(th + 0.5 * h * k1);
        const double k3 = rate(th + 0.5 * h * k2);
        const double k4 = rate(th + h * k3);
        th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

double SquircleProgram::angle_at(double t) const {
    double tm = std::fmod(t, period_);
    if (tm < 0.0) tm += period_;
    const double laps = std::floor(t / period_);
    const double pos = tm / period_ * (angle_table_.size() - 1);
    const size_t i = std::min(static_cast<size_t>(pos), angle_table_.size() - 2);
    const double frac = pos - static_cast<double>(i);
    const double lap_span = angle_table_.back() - angle_table_.front();
    return angle_table_[i] + frac * (angle_table_[i + 1] - angle_table_[i]) + laps * lap_span;
}

ReferenceSample SquircleProgram::reference(double t) const {
    auto pos_vel = [&](double tt) {
        const double th = angle_at(tt);
        const double r = squircle_radius(side_, th);
        const double rd = squircle_radius_d(side_, th);
        const double c = std::cos(th), s = std::sin(th);
        const Eigen::Vector2d p = center_ + Eigen::Vector2d(r * c, r * s);
        Eigen::Vector2d tangent{rd * c - r * s, rd * s + r * c};
        tangent.normalize();
        const double c2 = std::cos(2.0 * th);
        const double v = v_corner_ + (v_straight_ - v_corner_) * c2 * c2;
        return std::pair{p, Eigen::Vector2d(v * tangent)};
    };
    ReferenceSample out;
    const auto [p, v] = pos_vel(t);
    out.position = p;
    out.velocity = v;
    const double h = 1e-3;
    out.acceleration = (pos_vel(t + h).second - pos_vel(t - h).second) / (2.0 * h);
    return out;
}

// ---------------------------------------------------------------------------
// Waypoints

WaypointProgram::WaypointProgram(std::vector<Eigen::Vector2d> waypoints, double speed,
                                 bool loop)
    : wps_(std::move(waypoints)), speed_(speed), loop_(loop) {
    if (wps_.size() < 2) throw std::invalid_argument("WaypointProgram: need >= 2 waypoints");
    if (speed_ <= 0.0) throw std::invalid_argument("WaypointProgram: speed must be positive");
    const size_t legs = loop_ ? wps_.size() : wps_.size() - 1;
    double t = 0.0;
    for (size_t i = 0; i < legs; ++i) {
        leg_start_.push_back(t);
        t += (wps_[(i + 1) % wps_.size()] - wps_[i]).norm() / speed_;
    }
    total_ = t;
}

ReferenceSample WaypointProgram::reference(double t) const {
    if (loop_) {
        t = std::fmod(t, total_);
        if (t < 0.0) t += total_;
    } else if (t >= total_) {
        ReferenceSample s;
        s.position = wps_.back();
        return s;
    }
    size_t leg = leg_start_.size() - 1;
    for (size_t i = 1; i < leg_start_.size(); ++i) {
        if (t < leg_start_[i]) { leg = i - 1; break; }
    }
    const Eigen::Vector2d a = wps_[leg];
    const Eigen::Vector2d b = wps_[(leg + 1) % wps_.size()];
    const Eigen::Vector2d dir = (b - a).normalized();
    ReferenceSample s;
    s.position = a + dir * speed_ * (t - leg_start_[leg]);
    s.velocity = dir * speed_;
    return s;
}

}  // namespace pursuit
