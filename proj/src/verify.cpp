#include "mslab/verify.hpp"

#include "mslab/dynamics.hpp"
#include "mslab/io.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace mslab {

namespace {

const double kPi = std::acos(-1.0);
const Container kUnit{1.0, {0.0, 0.0}};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void check(VerifyReport& rep, const std::string& name, bool pass, const std::string& detail) {
    rep.checks.push_back({name, pass, detail});
}

void geometry_suite(VerifyReport& rep, unsigned seed) {
    {
        const ReferenceCurve c = build_reference_curve(CurveSpec::circle({0, 0}, 0.4, 128), kUnit);
        double err = 0.0;
        for (double k : c.kappa) err = std::max(err, std::fabs(k - 2.5));
        check(rep, "circle curvature 1/R", err < 1e-10, "max deviation " + num(err));
    }
    {
        const ReferenceCurve c =
            build_reference_curve(CurveSpec::ellipse({0, 0}, 0.5, 0.4, 128), kUnit);
        const TubeData tube = tube_and_ball(c, kUnit);
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
        std::uniform_real_distribution<double> us(-0.999, 0.999);
        double worst = 0.0;
        for (int trial = 0; trial < 2000; ++trial) {
            const double t = ut(rng), s = us(rng) * tube.a;
            const Vec2 dp = c.derivative(t, 1);
            const double sp = norm(dp);
            const Vec2 nu{dp.y / sp, -dp.x / sp};
            const Vec2 x = c.point(t) + s * nu;
            const Projection pr = signed_distance_project(c, x, &tube);
            const Vec2 dpf = c.derivative(pr.theta, 1);
            const double spf = norm(dpf);
            const Vec2 nuf{dpf.y / spf, -dpf.x / spf};
            worst = std::max(worst, dist(pr.foot + pr.d * nuf, x));
        }
        check(rep, "projection round trip", worst < 1e-9, "max gap " + num(worst));
    }
    {
        const ReferenceCurve c = build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 128), kUnit);
        const TubeData tube = tube_and_ball(c, kUnit);
        const LevelFunction lf{c, tube};
        const double h = 1e-6;
        double err = 0.0;
        for (int j = 0; j < c.n; j += 8) {
            const Vec2 x = c.p[j];
            const double gx = (level_function_eval(lf, {x.x + h, x.y}) -
                               level_function_eval(lf, {x.x - h, x.y})) /
                              (2 * h);
            const double gy = (level_function_eval(lf, {x.x, x.y + h}) -
                               level_function_eval(lf, {x.x, x.y - h})) /
                              (2 * h);
            err = std::max(err, std::fabs(std::hypot(gx, gy) - 1.0));
        }
        check(rep, "level-function gradient is unit on the curve", err < 1e-6,
              "max deviation " + num(err));
    }
    {
        std::mt19937 rng(seed + 1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto rand_curve = [&]() {
            TrigSeries radial;
            radial.c.assign(4, 0.0);
            radial.s.assign(4, 0.0);
            radial.c[0] = 0.4 + 0.05 * u(rng);
            for (int k = 1; k <= 3; ++k) {
                radial.c[k] = 0.02 * u(rng);
                radial.s[k] = 0.02 * u(rng);
            }
            return build_reference_curve(CurveSpec::polar({0, 0}, radial, 64), kUnit);
        };
        const ReferenceCurve a = rand_curve(), b = rand_curve(), c = rand_curve();
        bool ok = true;
        for (int order : {0, 2}) {
            const double dab = bundle_distance(a, b, order);
            if (dab != bundle_distance(b, a, order)) ok = false;
            if (bundle_distance(a, c, order) >
                dab + bundle_distance(b, c, order) + 1e-12)
                ok = false;
        }
        check(rep, "bundle distance symmetry and triangle inequality", ok, "random triple");
    }
    {
        const ReferenceCurve c = build_reference_curve(CurveSpec::circle({0, 0}, 0.35, 128), kUnit);
        const TubeData t = tube_and_ball(c, kUnit);
        const double expect = std::min(0.35, 1.0 - 0.35);
        check(rep, "circle rolling ball equals min(R, clearance)",
              std::fabs(t.r_ball - expect) < 1e-6,
              num(t.r_ball) + " vs " + num(expect));
    }
    {
        const ReferenceCurve c =
            build_reference_curve(CurveSpec::ellipse({0, 0}, 0.5, 0.4, 128), kUnit);
        double total = 0.0;
        for (int j = 0; j < c.n; ++j) total += c.kappa[j] * c.speed[j];
        total *= 2.0 * kPi / c.n;
        check(rep, "total curvature is 2 pi", std::fabs(total - 2.0 * kPi) < 1e-8,
              num(total));
    }
}

void elliptic_suite(VerifyReport& rep, unsigned seed) {
    {
        const ReferenceCurve gamma =
            build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 128), kUnit);
        std::vector<double> g(gamma.n);
        for (int j = 0; j < gamma.n; ++j) g[j] = std::cos(2.0 * gamma.node_theta(j));
        const std::vector<double> jump = dtn_jump(kUnit, gamma, g);
        double err = 0.0;
        for (int j = 0; j < gamma.n; ++j)
            err = std::max(err, std::fabs(jump[j] + 128.0 / 17.0 * g[j]));
        err /= 128.0 / 17.0;
        check(rep, "concentric mode-2 jump -128/17", err < 1e-10, "rel error " + num(err));

        const TwoPhaseSolution sol = solve_two_phase(kUnit, gamma, g);
        const double energy = dirichlet_energy(sol);
        check(rep, "dirichlet energy 64*pi/17",
              std::fabs(energy - 64.0 * kPi / 17.0) < 1e-9, num(energy));
    }
    {
        std::mt19937 rng(seed + 2);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        TrigSeries radial;
        radial.c.assign(4, 0.0);
        radial.s.assign(4, 0.0);
        radial.c[0] = 0.45;
        for (int k = 2; k <= 3; ++k) {
            radial.c[k] = 0.03 * u(rng);
            radial.s[k] = 0.03 * u(rng);
        }
        const ReferenceCurve gamma =
            build_reference_curve(CurveSpec::polar({0, 0}, radial, 128), kUnit);
        std::vector<double> g(gamma.n);
        for (double& x : g) x = u(rng);
        const std::vector<double> jump = dtn_jump(kUnit, gamma, g);
        double total = 0.0, scale = 1.0;
        for (int j = 0; j < gamma.n; ++j) {
            total += jump[j] * gamma.speed[j];
            scale += std::fabs(jump[j]) * gamma.speed[j];
        }
        check(rep, "flux compatibility on a random interface",
              std::fabs(total) < 1e-9 * scale, "integral " + num(total));
    }
    {
        const ReferenceCurve gamma =
            build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 64), kUnit);
        TwoPhaseOperator op(kUnit, gamma);
        bool negative = true;
        double leak_worst = 0.0;
        for (int k = 1; k <= 16; ++k) {
            std::vector<double> g(gamma.n);
            for (int j = 0; j < gamma.n; ++j) g[j] = std::cos(k * gamma.node_theta(j));
            const std::vector<double> jump = op.jump_of(g);
            if (jump[0] >= 0.0) negative = false;
            const TrigSeries f = trig_analyze(jump);
            const double peak = std::hypot(f.c[k], f.s[k]);
            for (int m = 0; m <= f.max_mode(); ++m) {
                if (m == k) continue;
                leak_worst = std::max(leak_worst, std::hypot(f.c[m], f.s[m]) / peak);
            }
        }
        check(rep, "jump eigenvalues negative for k >= 1", negative, "k <= 16");
        check(rep, "fourier diagonality on circles", leak_worst < 1e-8,
              "max leakage " + num(leak_worst));
    }
}

void stepper_suite(VerifyReport& rep, unsigned) {
    {
        const double s = sigma_factor(1.0, 2.0, 0.75);
        check(rep, "sigma factor closed form", std::fabs(s - 1.0 / std::sqrt(1.5)) < 1e-12,
              num(s));
    }
    {
        bool ok = std::fabs(compute_mu0(1, 4.0, Mu0Kind::SecondOrder) - 7.0 / 8.0) < 1e-14 &&
                  std::fabs(compute_mu0(2, 6.0, Mu0Kind::MullinsSekerka) - 11.0 / 18.0) < 1e-14;
        check(rep, "critical weights", ok, "7/8 and 11/18");
    }
    {
        const WeightedGrid g = WeightedGrid::make(1.0, 400, 2.0, 0.75);
        const NormSuite ns = norms_scalar(2.0, 0.75);
        std::vector<std::vector<double>> u(g.steps + 1, {0.0});
        for (int j = 1; j <= g.steps; ++j) u[j] = {std::pow(g.t[j], -0.25)};
        const double nrm = weighted_norm(u, g, SpaceSel::X0, ns);
        check(rep, "weight cancels the t^{-1/4} singularity", std::fabs(nrm - 1.0) < 1e-10,
              num(nrm));
    }
    {
        auto heat = make_second_order([](double, double) { return 1.0; },
                                      [](double, double) { return 0.0; }, 32);
        std::vector<double> u0(32);
        for (int j = 1; j <= 32; ++j) u0[j - 1] = std::sin(kPi * j / 33.0);
        const WeightedGrid g = WeightedGrid::make(0.25, 64, 2.0, 1.0, 1.0);
        const PicardResult res = picard_window(*heat, u0, g);
        const double decay = std::exp(-kPi * kPi * 0.25);
        double err = 0.0;
        for (int j = 1; j <= 32; ++j)
            err = std::max(err, std::fabs(res.states.back()[j - 1] -
                                          decay * std::sin(kPi * j / 33.0)));
        check(rep, "heat decay on the graded engine", err < 5e-3, "max error " + num(err));
        check(rep, "linear picard contracts immediately", res.diagnostics.kappa_hat < 1e-10,
              "kappa " + num(res.diagnostics.kappa_hat));
    }
}

void dynamics_suite(VerifyReport& rep, unsigned) {
    {
        std::vector<double> t, d;
        for (int j = 0; j <= 60; ++j) {
            t.push_back(0.05 * j);
            d.push_back(3.0 * std::exp(-2.0 * 0.05 * j));
        }
        const RateFit fit = exponential_rate(t, d);
        check(rep, "synthetic exponential rate", std::fabs(fit.omega - 2.0) < 1e-10,
              "omega " + num(fit.omega) + " quality " + num(fit.quality));
    }
    {
        const ReferenceCurve circle =
            build_reference_curve(CurveSpec::circle({0.1, -0.05}, 0.3, 128), kUnit);
        const EquilibriumFit fc = fit_equilibrium(circle);
        const ReferenceCurve ell =
            build_reference_curve(CurveSpec::ellipse({0, 0}, 0.5, 0.4, 128), kUnit);
        const EquilibriumFit fe = fit_equilibrium(ell);
        check(rep, "circle fit residual", fc.residual < 1e-10, num(fc.residual));
        check(rep, "ellipse fit residual exceeds 0.04", fe.residual >= 0.04, num(fe.residual));
    }
    {
        const MsState st = make_ms_state(kUnit, {0, 0}, 0.5, 64, std::vector<double>(64, 0.0));
        const LinearizationReport lr = linearize_at(st, 1e-5, 8);
        const double expect = 1536.0 / 17.0;
        const double lam2 = mode_eigenvalue(lr, 2);
        check(rep, "mode-2 eigenvalue 1536/17", std::fabs(lam2 - expect) < 0.01 * expect,
              num(lam2));
        check(rep, "kernel dimension 3", lr.kernel_dim == 3,
              "dim " + std::to_string(lr.kernel_dim));
        check(rep, "normally stable verdict", lr.normally_stable,
              lr.normally_stable ? "stable" : "unstable");
    }
}

} // namespace

bool VerifyReport::all_pass() const {
    for (const VerifyCheck& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string VerifyReport::text() const {
    std::ostringstream os;
    os << "suite " << suite << "\n";
    for (const VerifyCheck& c : checks)
        os << (c.pass ? "PASS" : "FAIL") << " " << c.name << " (" << c.detail << ")\n";
    os << (all_pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return os.str();
}

VerifyReport verify_suite(const std::string& suite, unsigned seed) {
    VerifyReport rep;
    rep.suite = suite;
    if (suite == "geometry" || suite == "all") geometry_suite(rep, seed);
    if (suite == "elliptic" || suite == "all") elliptic_suite(rep, seed);
    if (suite == "stepper" || suite == "all") stepper_suite(rep, seed);
    if (suite == "dynamics" || suite == "all") dynamics_suite(rep, seed);
    if (rep.checks.empty()) throw ParameterOutOfRange("unknown verify suite: " + suite);
    return rep;
}

} // namespace mslab
