#include "mslab/geometry.hpp"

#include "mslab/errors.hpp"

#include <cmath>
#include <doctest.h>
#include <random>

using namespace mslab;

namespace {

const double kPi = std::acos(-1.0);
const Container kUnit{1.0, {0.0, 0.0}};

ReferenceCurve random_polar_curve(std::mt19937& rng, int n = 128) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrigSeries radial;
    radial.c.assign(5, 0.0);
    radial.s.assign(5, 0.0);
    radial.c[0] = 0.4 + 0.05 * u(rng);
    for (int k = 1; k <= 4; ++k) {
        radial.c[k] = 0.02 * u(rng);
        radial.s[k] = 0.02 * u(rng);
    }
    return build_reference_curve(CurveSpec::polar({0.0, 0.0}, radial, n), kUnit);
}

} // namespace

TEST_CASE("circle curvature is 1/R at every node") {
    const ReferenceCurve c = build_reference_curve(CurveSpec::circle({0, 0}, 0.4, 128), kUnit);
    for (double k : c.kappa) CHECK(k == doctest::Approx(2.5).epsilon(1e-11));
    for (const Vec2& nu : c.normal) CHECK(norm(nu) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ellipse max curvature matches dense sampling of the parametric formula") {
    const double a = 0.5, b = 0.4;
    // oracle: kappa(t) = a b / (a^2 sin^2 t + b^2 cos^2 t)^{3/2}, densely sampled
    double oracle = 0.0;
    for (int j = 0; j < 200000; ++j) {
        const double t = 2.0 * kPi * j / 200000;
        const double g = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
        oracle = std::max(oracle, a * b / (g * std::sqrt(g)));
    }
    CHECK(oracle == doctest::Approx(3.125).epsilon(1e-9));
    const ReferenceCurve c = build_reference_curve(CurveSpec::ellipse({0, 0}, a, b, 256), kUnit);
    double kmax = 0.0;
    for (double k : c.kappa) kmax = std::max(kmax, k);
    CHECK(kmax == doctest::Approx(3.125).epsilon(1e-10));
}

TEST_CASE("mode-0 polar spec equals the circle spec") {
    TrigSeries radial;
    radial.c.assign(2, 0.0);
    radial.s.assign(2, 0.0);
    radial.c[0] = 0.4;
    const ReferenceCurve cp = build_reference_curve(CurveSpec::polar({0, 0}, radial, 64), kUnit);
    const ReferenceCurve cc = build_reference_curve(CurveSpec::circle({0, 0}, 0.4, 64), kUnit);
    for (int j = 0; j < 64; ++j) {
        CHECK(cp.p[j].x == doctest::Approx(cc.p[j].x).epsilon(1e-14));
        CHECK(cp.p[j].y == doctest::Approx(cc.p[j].y).epsilon(1e-14));
    }
    CHECK(cp.is_circle());
}

TEST_CASE("signed distance on a circle") {
    const ReferenceCurve c = build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 128), kUnit);
    const Projection pr = signed_distance_project(c, {0.8, 0.0});
    CHECK(pr.d == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(pr.foot.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::fabs(pr.foot.y) < 1e-10);

    const Projection on = signed_distance_project(c, c.point(1.3));
    CHECK(std::fabs(on.d) < 1e-12);
    CHECK(dist(on.foot, c.point(1.3)) < 1e-10);

    const Projection in = signed_distance_project(c, {0.2, 0.0});
    CHECK(in.d == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("ellipse projection matches the dense-grid nearest-point oracle") {
    const double a = 0.5, b = 0.4;
    const Vec2 x{0.6, 0.1};
    // brute-force oracle over a dense parameter grid plus golden-section refinement
    double tbest = 0.0, dbest = 1e300;
    const int m = 400000;
    for (int j = 0; j < m; ++j) {
        const double t = 2.0 * kPi * j / m;
        const double d2 = norm2(Vec2{a * std::cos(t) - x.x, b * std::sin(t) - x.y});
        if (d2 < dbest) { dbest = d2; tbest = t; }
    }
    double lo = tbest - 2.0 * kPi / m, hi = tbest + 2.0 * kPi / m;
    const auto d2 = [&](double t) {
        return norm2(Vec2{a * std::cos(t) - x.x, b * std::sin(t) - x.y});
    };
    for (int it = 0; it < 120; ++it) {
        const double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
        if (d2(m1) < d2(m2)) hi = m2;
        else lo = m1;
    }
    const double oracle = std::sqrt(d2(0.5 * (lo + hi)));

    const ReferenceCurve c = build_reference_curve(CurveSpec::ellipse({0, 0}, a, b, 256), kUnit);
    const Projection pr = signed_distance_project(c, x);
    CHECK(std::fabs(pr.d) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("round trip through the tube holds to 1e-9") {
    const ReferenceCurve c = build_reference_curve(CurveSpec::ellipse({0, 0}, 0.5, 0.4, 128), kUnit);
    const TubeData tube = tube_and_ball(c, kUnit);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> us(-0.999, 0.999);
    for (int trial = 0; trial < 10000; ++trial) {
        const double t = ut(rng);
        const double s = us(rng) * tube.a;
        const Vec2 dp = c.derivative(t, 1);
        const double sp = norm(dp);
        const Vec2 nu{dp.y / sp, -dp.x / sp};
        const Vec2 x = c.point(t) + s * nu;
        const Projection pr = signed_distance_project(c, x, &tube);
        CHECK(pr.in_tube);
        const Vec2 dpf = c.derivative(pr.theta, 1);
        const double spf = norm(dpf);
        const Vec2 nuf{dpf.y / spf, -dpf.x / spf};
        const Vec2 back = pr.foot + pr.d * nuf;
        CHECK(dist(back, x) < 1e-9);
        CHECK(std::fabs(pr.d - s) < 1e-9);
    }
}

TEST_CASE("tube and ball data for circles and the ellipse") {
    const ReferenceCurve c1 = build_reference_curve(CurveSpec::circle({0, 0}, 0.4, 128), kUnit);
    const TubeData t1 = tube_and_ball(c1, kUnit);
    CHECK(t1.kappa_max == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(t1.r_ball == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(t1.a == doctest::Approx(0.36).epsilon(1e-6));

    const ReferenceCurve c2 = build_reference_curve(CurveSpec::ellipse({0, 0}, 0.5, 0.4, 256), kUnit);
    const TubeData t2 = tube_and_ball(c2, kUnit);
    // interior curvature bound b^2 / a = 0.32 limits the rolling ball
    CHECK(t2.r_ball == doctest::Approx(0.32).epsilon(1e-3));
    CHECK(t2.a == doctest::Approx(0.288).epsilon(1e-3));

    const Container small{0.45, {0.0, 0.0}};
    const ReferenceCurve c3 = build_reference_curve(CurveSpec::circle({0, 0}, 0.4, 128), small);
    const TubeData t3 = tube_and_ball(c3, small);
    CHECK(t3.r_ball == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("tube of a circle equals min(R, clearance) analytically") {
    for (double R : {0.2, 0.35, 0.45}) {
        const ReferenceCurve c = build_reference_curve(CurveSpec::circle({0, 0}, R, 128), kUnit);
        const TubeData t = tube_and_ball(c, kUnit);
        CHECK(t.r_ball == doctest::Approx(std::min(R, 1.0 - R)).epsilon(1e-6));
    }
}

TEST_CASE("level function values and gradient") {
    const ReferenceCurve c = build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 128), kUnit);
    const TubeData tube = tube_and_ball(c, kUnit);
    const LevelFunction lf{c, tube};
    const double a = tube.a;

    CHECK(level_function_eval(lf, c.point(0.7)) == doctest::Approx(0.0).epsilon(1e-12));
    // chi == 1 inside the inner third of the tube
    CHECK(level_function_eval(lf, {0.5 + 0.1 * a, 0.0}) == doctest::Approx(0.1 * a).epsilon(1e-12));
    // outside the tube the level function saturates at the sign
    CHECK(level_function_eval(lf, {0.5 + 1.1 * a, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(level_function_eval(lf, {0.5 - 1.1 * a, 0.0}) == doctest::Approx(-1.0).epsilon(1e-12));

    const double h = 1e-6;
    for (int j = 0; j < c.n; j += 16) {
        const Vec2 x = c.p[j];
        const double gx =
            (level_function_eval(lf, {x.x + h, x.y}) - level_function_eval(lf, {x.x - h, x.y})) /
            (2.0 * h);
        const double gy =
            (level_function_eval(lf, {x.x, x.y + h}) - level_function_eval(lf, {x.x, x.y - h})) /
            (2.0 * h);
        CHECK(std::hypot(gx, gy) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(gx == doctest::Approx(c.normal[j].x).epsilon(1e-5));
        CHECK(gy == doctest::Approx(c.normal[j].y).epsilon(1e-5));
    }
}

TEST_CASE("bundle distance on concentric circles") {
    const ReferenceCurve c4 = build_reference_curve(CurveSpec::circle({0, 0}, 0.4, 128), kUnit);
    const ReferenceCurve c5 = build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 128), kUnit);
    CHECK(bundle_distance(c4, c4, 0) == 0.0);
    CHECK(bundle_distance(c4, c4, 2) == 0.0);
    CHECK(bundle_distance(c4, c5, 0) == doctest::Approx(0.1).epsilon(1e-9));

    // brute-force Hausdorff over dense lifted samples: the shape-operator gap
    // |2.5 - 2.0| dominates every pointwise max
    double oracle = 0.0;
    {
        const int m = 2048;
        for (int i = 0; i < m; ++i) {
            const double ti = 2.0 * kPi * i / m;
            double best = 1e300;
            for (int j = 0; j < m; ++j) {
                const double tj = 2.0 * kPi * j / m;
                const double dp = std::hypot(0.4 * std::cos(ti) - 0.5 * std::cos(tj),
                                             0.4 * std::sin(ti) - 0.5 * std::sin(tj));
                const double dn =
                    std::hypot(std::cos(ti) - std::cos(tj), std::sin(ti) - std::sin(tj));
                best = std::min(best, std::max({dp, dn, 0.5}));
            }
            oracle = std::max(oracle, best);
        }
    }
    CHECK(oracle == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(bundle_distance(c4, c5, 2) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("bundle distance is a metric on sampled curves") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 4; ++trial) {
        const ReferenceCurve a = random_polar_curve(rng);
        const ReferenceCurve b = random_polar_curve(rng);
        const ReferenceCurve c = random_polar_curve(rng);
        for (int order : {0, 2}) {
            const double dab = bundle_distance(a, b, order);
            const double dba = bundle_distance(b, a, order);
            CHECK(dab == dba);
            CHECK(dab >= 0.0);
            const double dac = bundle_distance(a, c, order);
            const double dbc = bundle_distance(b, c, order);
            CHECK(dac <= dab + dbc + 1e-12);
        }
    }
}

TEST_CASE("invalid curve specs are rejected") {
    CHECK_THROWS_AS(build_reference_curve(CurveSpec::circle({0.3, 0.0}, 0.9, 64), kUnit),
                    OutsideContainer);
    // figure eight from cartesian coefficients
    TrigSeries fx, fy;
    fx.c.assign(3, 0.0);
    fx.s.assign(3, 0.0);
    fy.c.assign(3, 0.0);
    fy.s.assign(3, 0.0);
    fx.s[1] = 0.5;
    fy.s[2] = 0.25;
    CHECK_THROWS_AS(build_reference_curve(CurveSpec::cartesian(fx, fy, 64), kUnit),
                    SelfIntersection);
}
