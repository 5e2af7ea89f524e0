#include "mslab/models.hpp"

#include <cmath>
#include <doctest.h>
#include <random>

using namespace mslab;

namespace {

const double kPi = std::acos(-1.0);
const Container kUnit{1.0, {0.0, 0.0}};

double concentric_jump_eigenvalue(int k, double R, double b) {
    const double alpha = 1.0 / (std::pow(R, k) + std::pow(b, 2 * k) * std::pow(R, -k));
    return alpha * k * (std::pow(R, k - 1) - std::pow(b, 2 * k) * std::pow(R, -k - 1)) - k / R;
}

// dispersion oracle: decay rate of mode k around the centered circle
double dispersion_rate(int k, double R, double b) {
    return -concentric_jump_eigenvalue(k, R, b) * (k * k - 1.0) / (R * R);
}

std::vector<double> mode_state(int n, int k, double amp, double phase = 0.0) {
    std::vector<double> rho(n);
    for (int j = 0; j < n; ++j) rho[j] = amp * std::cos(k * (2.0 * kPi * j / n) + phase);
    return rho;
}

} // namespace

TEST_CASE("quasilinear decay: X0 norm decreases monotonically for a = 1 + u^2") {
    const int m = 32;
    auto pb = make_second_order([](double u, double) { return 1.0 + u * u; },
                                [](double, double) { return 0.0; }, m);
    std::vector<double> u(m);
    for (int j = 1; j <= m; ++j) u[j - 1] = 0.1 * std::sin(kPi * j / (m + 1.0));
    double prev = pb->norms().x0(u);
    for (int s = 0; s < 200; ++s) {
        u = semi_implicit_step(*pb, u, 1e-3);
        const double cur = pb->norms().x0(u);
        CHECK(cur <= prev * (1.0 + 1e-12));
        prev = cur;
    }
}

TEST_CASE("linear reaction shifts the decay rate to pi^2 - 1") {
    const int m = 64;
    auto pb = make_second_order([](double, double) { return 1.0; },
                                [](double u, double) { return u; }, m);
    std::vector<double> u(m);
    for (int j = 1; j <= m; ++j) u[j - 1] = std::sin(kPi * j / (m + 1.0));
    const double dt = 5e-5;
    const int steps = 4000; // T = 0.2
    const double n0 = pb->norms().x0(u);
    for (int s = 0; s < steps; ++s) u = semi_implicit_step(*pb, u, dt);
    const double n1 = pb->norms().x0(u);
    const double rate = std::log(n0 / n1) / (steps * dt);
    CHECK(rate == doctest::Approx(kPi * kPi - 1.0).epsilon(0.01));
}

TEST_CASE("constant heights over circles are equilibria") {
    for (auto [R, c] : {std::pair{0.4, 0.03}, std::pair{0.3, -0.02}, std::pair{0.25, 0.0}}) {
        const MsState st = make_ms_state(kUnit, {0, 0}, R, 64, std::vector<double>(64, c));
        const MsVectorFieldEval ev = ms_vector_field(st);
        for (double v : ev.rho_dot) CHECK(std::fabs(v) < 1e-10);
        CHECK(ms_equilibrium_residual(st) < 1e-10);
    }
}

TEST_CASE("mode-2 perturbation decays at the dispersion rate") {
    const int n = 128;
    const double eps = 1e-4;
    const MsState st = make_ms_state(kUnit, {0, 0}, 0.5, n, mode_state(n, 2, eps));
    const MsVectorFieldEval ev = ms_vector_field(st);
    const double lambda = dispersion_rate(2, 0.5, 1.0);
    CHECK(lambda == doctest::Approx(1536.0 / 17.0).epsilon(1e-12));
    for (int j = 0; j < n; ++j)
        CHECK(ev.rho_dot[j] == doctest::Approx(-lambda * st.rho[j]).epsilon(0.01).scale(lambda * eps));
}

TEST_CASE("normal velocity integrates to zero along the interface") {
    const int n = 128;
    std::vector<double> rho = mode_state(n, 2, 0.015);
    const std::vector<double> r3 = mode_state(n, 3, 0.01, 0.4);
    for (int j = 0; j < n; ++j) rho[j] += r3[j];
    const MsState st = make_ms_state(kUnit, {0, 0}, 0.45, n, rho);
    const MsVectorFieldEval ev = ms_vector_field(st);
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += ev.normal_velocity[j] * ev.realized.speed[j];
    total *= 2.0 * kPi / n;
    CHECK(std::fabs(total) <= 1e-9 * ev.realized.perimeter());
}

TEST_CASE("vector field is equivariant under grid rotations") {
    const int n = 64;
    const int shift = n / 8;
    std::vector<double> rho(n), rho_rot(n);
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / n;
        rho[j] = 0.02 * std::cos(2.0 * t) + 0.01 * std::sin(3.0 * t);
    }
    for (int j = 0; j < n; ++j) rho_rot[j] = rho[(j - shift + n) % n];
    const MsState a = make_ms_state(kUnit, {0, 0}, 0.45, n, rho);
    const MsState b = make_ms_state(kUnit, {0, 0}, 0.45, n, rho_rot);
    const MsVectorFieldEval ea = ms_vector_field(a);
    const MsVectorFieldEval eb = ms_vector_field(b);
    double scale = 0.0;
    for (double v : ea.rho_dot) scale = std::max(scale, std::fabs(v));
    for (int j = 0; j < n; ++j)
        CHECK(eb.rho_dot[j] == doctest::Approx(ea.rho_dot[(j - shift + n) % n]).epsilon(1e-9).scale(scale));
}

TEST_CASE("model constructors gate the weight parameter") {
    const ReferenceCurve sigma = build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 64), kUnit);
    CHECK_THROWS_AS(ms_problem(kUnit, sigma, 6.0, 0.5), ParameterOutOfRange); // mu0 = 11/18
    CHECK_THROWS_AS(make_second_order([](double, double) { return 1.0; },
                                      [](double, double) { return 0.0; }, 16, 4.0, 0.8),
                    ParameterOutOfRange); // mu0 = 7/8
    CHECK_NOTHROW(make_second_order([](double, double) { return 1.0; },
                                    [](double, double) { return 0.0; }, 16, 2.0, 1.0));
}

TEST_CASE("ms problem: frozen operator is linear and diagonal at the circle") {
    const int n = 64;
    const double R = 0.5;
    const ReferenceCurve sigma = build_reference_curve(CurveSpec::circle({0, 0}, R, n), kUnit);
    auto pb = ms_problem(kUnit, sigma, 6.0, 0.75);

    const std::vector<double> zero(n, 0.0);
    // A(0) cos(k t) = -j_k k^2 / R^2 cos(k t)
    for (int k = 2; k <= 6; ++k) {
        const std::vector<double> u = mode_state(n, k, 1.0);
        const std::vector<double> au = pb->apply_A(zero, u);
        const double expect = -concentric_jump_eigenvalue(k, R, 1.0) * k * k / (R * R);
        for (int j = 0; j < n; ++j)
            CHECK(au[j] == doctest::Approx(expect * u[j]).epsilon(1e-8).scale(expect));
    }

    // linearity on random pairs
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    std::vector<double> v(n), u1(n), u2(n), combo(n);
    for (int j = 0; j < n; ++j) {
        v[j] = 0.01 * un(rng);
        u1[j] = un(rng);
        u2[j] = un(rng);
        combo[j] = 0.6 * u1[j] - 1.7 * u2[j];
    }
    const auto a_combo = pb->apply_A(v, combo);
    const auto a1 = pb->apply_A(v, u1);
    const auto a2 = pb->apply_A(v, u2);
    double scale = 0.0;
    for (double x : a_combo) scale = std::max(scale, std::fabs(x));
    for (int j = 0; j < n; ++j)
        CHECK(a_combo[j] == doctest::Approx(0.6 * a1[j] - 1.7 * a2[j]).epsilon(1e-9).scale(scale));
}

TEST_CASE("-A(v)v + F(v) reassembles the vector field") {
    const int n = 64;
    const ReferenceCurve sigma = build_reference_curve(CurveSpec::circle({0, 0}, 0.45, n), kUnit);
    auto pb = ms_problem(kUnit, sigma, 6.0, 0.75);
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / n;
        v[j] = 0.02 * std::cos(2 * t) - 0.015 * std::sin(4 * t);
    }
    const MsState st = make_ms_state(kUnit, {0, 0}, 0.45, n, v);
    const MsVectorFieldEval ev = ms_vector_field(st);
    const auto av = pb->apply_A(v, v);
    const auto fv = pb->apply_F(v);
    double scale = 0.0;
    for (double x : ev.rho_dot) scale = std::max(scale, std::fabs(x));
    for (int j = 0; j < n; ++j)
        CHECK(-av[j] + fv[j] == doctest::Approx(ev.rho_dot[j]).epsilon(1e-10).scale(scale));
}

TEST_CASE("equilibrium residual scales with the dispersion prediction") {
    const int n = 128;
    const MsState circle = make_ms_state(kUnit, {0, 0}, 0.5, n, std::vector<double>(n, 0.0));
    CHECK(ms_equilibrium_residual(circle) <= 1e-9);

    const double eps = 1e-3;
    const MsState pert = make_ms_state(kUnit, {0, 0}, 0.5, n, mode_state(n, 2, eps));
    const double expect = dispersion_rate(2, 0.5, 1.0) * eps;
    CHECK(ms_equilibrium_residual(pert) == doctest::Approx(expect).epsilon(0.02));

    // off-center circles are equilibria as well
    const MsState off = make_ms_state(kUnit, {0.1, 0.05}, 0.3, n, std::vector<double>(n, 0.0));
    CHECK(ms_equilibrium_residual(off) <= 1e-8);
}

TEST_CASE("perimeter shrinks at the dirichlet-energy rate; area is stationary") {
    const int n = 128;
    std::vector<double> rho = mode_state(n, 2, 0.02);
    const MsState st = make_ms_state(kUnit, {0, 0}, 0.5, n, rho);
    const MsVectorFieldEval ev = ms_vector_field(st);

    const double tau = 1e-6;
    auto perturbed = [&](double sign) {
        std::vector<double> r(n);
        for (int j = 0; j < n; ++j) r[j] = rho[j] + sign * tau * ev.rho_dot[j];
        return make_ms_state(kUnit, {0, 0}, 0.5, n, r);
    };
    const ReferenceCurve gp = ms_vector_field(perturbed(+1.0)).realized;
    const ReferenceCurve gm = ms_vector_field(perturbed(-1.0)).realized;

    const double dperim = (gp.perimeter() - gm.perimeter()) / (2.0 * tau);
    CHECK(dperim == doctest::Approx(-ev.dissipation).epsilon(1e-4));
    const double darea = (gp.enclosed_area() - gm.enclosed_area()) / (2.0 * tau);
    CHECK(std::fabs(darea) <= 1e-6 * ev.realized.enclosed_area());
}
