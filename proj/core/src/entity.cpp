#include "pursuit/entity.hpp"

#include <cmath>
#include <stdexcept>

namespace pursuit {

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);  // [-pi, pi]
    if (a <= -M_PI) a = M_PI;
    return a;
}

namespace {

// State vector for integration: [x, y, heading, speed].
using Vec4 = Eigen::Vector4d;

Vec4 pack(const EntityState& s) {
    return {s.position.x(), s.position.y(), s.heading, s.speed};
}

template <typename Deriv>
Vec4 rk4(const Vec4& y0, double dt, Deriv f) {
    const Vec4 k1 = f(y0);
    const Vec4 k2 = f(Vec4(y0 + 0.5 * dt * k1));
    const Vec4 k3 = f(Vec4(y0 + 0.5 * dt * k2));
    const Vec4 k4 = f(Vec4(y0 + dt * k3));
    return y0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

EntityState unpack(const Vec4& y, const EntityState& templ, bool* clamped) {
    EntityState out = templ;
    out.position = {y[0], y[1]};
    out.heading = wrap_angle(y[2]);
    out.speed = y[3];
    if (out.speed < kSpeedFloor) {
        out.speed = kSpeedFloor;
        if (clamped) *clamped = true;
    }
    return out;
}

}  // namespace

EntityState step_uas(const EntityState& state, const UasCommand& cmd, double dt,
                     bool* clamped) {
    if (clamped) *clamped = false;
    const Vec4 y = rk4(pack(state), dt, [&](const Vec4& s) {
        const double v = std::max(s[3], kSpeedFloor);
        return Vec4{v * std::cos(s[2]), v * std::sin(s[2]), cmd.a_lat / v, cmd.a_long};
    });
    return unpack(y, state, clamped);
}

EntityState step_vehicle(const EntityState& state, const VehicleCommand& cmd, double dt,
                         bool* clamped) {
    if (clamped) *clamped = false;
    const Vec4 y = rk4(pack(state), dt, [&](const Vec4& s) {
        const double v = std::max(s[3], kSpeedFloor);
        return Vec4{v * std::cos(s[2]), v * std::sin(s[2]),
                    cmd.a_b * std::sin(cmd.delta_b - s[2]) / v,
                    cmd.a_b * std::cos(cmd.delta_b - s[2])};
    });
    return unpack(y, state, clamped);
}

RelativeState relative_state(const EntityState& uas, const EntityState& vehicle) {
    const Eigen::Vector2d d = vehicle.position - uas.position;
    const double r = d.norm();
    if (r <= 0.0) throw std::invalid_argument("relative_state: coincident agents");
    RelativeState rel;
    rel.r = r;
    rel.theta = std::atan2(d.y(), d.x());
    rel.v_r = vehicle.speed * std::cos(vehicle.heading - rel.theta) -
              uas.speed * std::cos(uas.heading - rel.theta);
    rel.v_theta = vehicle.speed * std::sin(vehicle.heading - rel.theta) -
                  uas.speed * std::sin(uas.heading - rel.theta);
    return rel;
}

}  // namespace pursuit
