#include <doctest.h>

#include <cmath>

#include "pursuit/entity.hpp"
#include "pursuit/rng.hpp"

using namespace pursuit;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(2.5 * M_PI) == doctest::Approx(0.5 * M_PI));
    for (double a = -20.0; a < 20.0; a += 0.137) {
        const double w = wrap_angle(a);
        CHECK(w > -M_PI);
        CHECK(w <= M_PI);
        CHECK(std::abs(std::remainder(w - a, 2.0 * M_PI)) < 1e-12);
    }
}

TEST_CASE("step_uas zero command traces a straight line") {
    EntityState s;
    s.position = {0.0, 0.0};
    s.speed = 10.0;
    s.heading = 0.0;
    // dt = 1 via 30 substeps of the standard frame interval plus remainder.
    EntityState out = s;
    for (int i = 0; i < 100; ++i) out = step_uas(out, {0.0, 0.0}, 0.01);
    CHECK(out.position.x() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(out.position.y() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.speed == doctest::Approx(10.0));
    CHECK(out.heading == doctest::Approx(0.0));
}

TEST_CASE("step_uas heading rate equals a_lat / V") {
    EntityState s;
    s.speed = 10.0;
    const double dt = 1e-5;
    const EntityState out = step_uas(s, {1.0, 0.0}, dt);
    CHECK(out.heading / dt == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("step_uas constant a_lat traces the analytic circle") {
    // Radius V^2 / a_lat, angular rate a_lat / V.
    EntityState s;
    s.position = {0.0, 0.0};
    s.speed = 20.0;
    s.heading = 0.0;
    const double a_lat = 2.0, dt = 1.0 / 30.0, T = 30.0;
    const double radius = s.speed * s.speed / a_lat;
    const double omega = a_lat / s.speed;
    EntityState out = s;
    int n = static_cast<int>(T / dt);
    for (int i = 0; i < n; ++i) out = step_uas(out, {a_lat, 0.0}, dt);
    const double t = n * dt;
    const Eigen::Vector2d expect{radius * std::sin(omega * t),
                                 radius * (1.0 - std::cos(omega * t))};
    CHECK((out.position - expect).norm() < 1e-6 * radius);
    CHECK(out.speed == doctest::Approx(20.0));
}

TEST_CASE("step_uas clamps the speed floor and reports it") {
    EntityState s;
    s.speed = 0.2;
    bool clamped = false;
    const EntityState out = step_uas(s, {0.0, -10.0}, 0.1, &clamped);
    CHECK(clamped);
    CHECK(out.speed == doctest::Approx(kSpeedFloor));
}

TEST_CASE("step_vehicle acceleration decomposition") {
    EntityState s;
    s.speed = 20.0;
    s.heading = 0.0;
    const double dt = 1e-5;

    SUBCASE("along heading: pure speed change") {
        const EntityState out = step_vehicle(s, {2.0, 0.0}, dt);
        CHECK((out.speed - 20.0) / dt == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(std::abs(out.heading) < 1e-9);
    }
    SUBCASE("perpendicular: pure turn") {
        const EntityState out = step_vehicle(s, {2.0, M_PI / 2.0}, dt);
        CHECK(std::abs(out.speed - 20.0) / dt < 1e-4);
        CHECK(out.heading / dt == doctest::Approx(0.1).epsilon(1e-5));
    }
    SUBCASE("generic 45 degrees") {
        const EntityState out = step_vehicle(s, {2.0, M_PI / 4.0}, dt);
        CHECK((out.speed - 20.0) / dt == doctest::Approx(2.0 * std::cos(M_PI / 4.0)).epsilon(1e-5));
        CHECK(out.heading / dt ==
              doctest::Approx(2.0 * std::sin(M_PI / 4.0) / 20.0).epsilon(1e-5));
    }
}

TEST_CASE("relative_state examples") {
    EntityState a, b;
    a.position = {0.0, 0.0};
    a.speed = 10.0;
    a.heading = 0.0;

    SUBCASE("identical velocities") {
        b.position = {100.0, 0.0};
        b.speed = 10.0;
        b.heading = 0.0;
        const RelativeState rel = relative_state(a, b);
        CHECK(rel.r == doctest::Approx(100.0));
        CHECK(rel.theta == doctest::Approx(0.0));
        CHECK(rel.v_r == doctest::Approx(0.0));
        CHECK(rel.v_theta == doctest::Approx(0.0));
    }
    SUBCASE("stationary target straight above in y") {
        b.position = {0.0, 100.0};
        b.speed = 1e-12;
        b.heading = 0.0;
        const RelativeState rel = relative_state(a, b);
        CHECK(rel.theta == doctest::Approx(M_PI / 2.0));
        CHECK(rel.v_r == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(rel.v_theta == doctest::Approx(10.0));
    }
    SUBCASE("coincident agents throw") {
        b.position = {0.0, 0.0};
        CHECK_THROWS_AS((void)relative_state(a, b), std::invalid_argument);
    }
}

TEST_CASE("relative_state matches finite differences on random trajectories") {
    Rng rng(42);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        EntityState a, b;
        a.position = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        a.speed = rng.uniform(1.0, 30.0);
        a.heading = rng.uniform(-M_PI, M_PI);
        b.position = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        b.speed = rng.uniform(1.0, 30.0);
        b.heading = rng.uniform(-M_PI, M_PI);
        const RelativeState rel = relative_state(a, b);
        if (rel.r < 1.0) continue;

        const double h = 1e-6;
        EntityState a2 = a, b2 = b;
        a2.position += a.velocity() * h;
        b2.position += b.velocity() * h;
        const RelativeState rel2 = relative_state(a2, b2);
        const double vr_fd = (rel2.r - rel.r) / h;
        const double vtheta_fd = rel.r * std::remainder(rel2.theta - rel.theta, 2.0 * M_PI) / h;
        CHECK(rel.v_r == doctest::Approx(vr_fd).epsilon(1e-4));
        CHECK(rel.v_theta == doctest::Approx(vtheta_fd).epsilon(1e-4));
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("finite-difference error shrinks first order in dt") {
    EntityState a, b;
    a.position = {0.0, 0.0};
    a.speed = 12.0;
    a.heading = 0.3;
    b.position = {40.0, -25.0};
    b.speed = 18.0;
    b.heading = -1.0;
    const RelativeState rel = relative_state(a, b);
    double prev_err = 1e18;
    for (const double h : {1e-2, 1e-3, 1e-4}) {
        EntityState a2 = a, b2 = b;
        a2.position += a.velocity() * h;
        b2.position += b.velocity() * h;
        const RelativeState rel2 = relative_state(a2, b2);
        const double err = std::abs((rel2.r - rel.r) / h - rel.v_r);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-2);
}

TEST_CASE("zero-command conservation and heading wrap invariant") {
    EntityState u, v;
    u.position = {3.0, -2.0};
    u.speed = 17.0;
    u.heading = 2.9;
    v = u;
    for (int i = 0; i < 300; ++i) {
        u = step_uas(u, {0.0, 0.0}, 1.0 / 30.0);
        v = step_vehicle(v, {0.0, 0.0}, 1.0 / 30.0);
        CHECK(u.heading > -M_PI);
        CHECK(u.heading <= M_PI);
    }
    CHECK(u.speed == doctest::Approx(17.0));
    CHECK(u.heading == doctest::Approx(2.9));
    CHECK(v.speed == doctest::Approx(17.0));
    // Straight line: y/x slope equals tan(heading).
    const Eigen::Vector2d d = u.position - Eigen::Vector2d{3.0, -2.0};
    CHECK(std::atan2(d.y(), d.x()) == doctest::Approx(2.9));
}

TEST_CASE("stepping is deterministic") {
    EntityState a;
    a.speed = 21.0;
    a.heading = 0.7;
    EntityState x = a, y = a;
    for (int i = 0; i < 100; ++i) {
        x = step_uas(x, {1.3, -0.2}, 1.0 / 30.0);
        y = step_uas(y, {1.3, -0.2}, 1.0 / 30.0);
    }
    CHECK(x.position.x() == y.position.x());
    CHECK(x.position.y() == y.position.y());
    CHECK(x.speed == y.speed);
    CHECK(x.heading == y.heading);
}
