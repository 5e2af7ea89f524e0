#include "mslab/stepper.hpp"

#include "mslab/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace mslab {

namespace {

const double kPi = std::acos(-1.0);

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& y) {
    std::vector<double> r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * y[i];
    return r;
}

std::vector<double> sub(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

double sup_norm(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

} // namespace

WeightedGrid WeightedGrid::make(double horizon, int steps, double p, double mu, double grading) {
    if (!(horizon > 0.0)) throw ParameterOutOfRange("grid horizon must be positive");
    if (steps < 1) throw ParameterOutOfRange("grid needs at least one step");
    if (!(p > 1.0)) throw ParameterOutOfRange("p must exceed 1");
    if (!(mu > 1.0 / p && mu <= 1.0)) throw ParameterOutOfRange("mu must lie in (1/p, 1]");
    WeightedGrid g;
    g.horizon = horizon;
    g.steps = steps;
    g.p = p;
    g.mu = mu;
    g.grading = grading > 0.0 ? grading : std::max(1.0, 2.0 / (mu - 1.0 / p));
    g.t.resize(steps + 1);
    for (int j = 0; j <= steps; ++j)
        g.t[j] = horizon * std::pow(static_cast<double>(j) / steps, g.grading);
    for (int j = 0; j < steps; ++j)
        if (!(g.t[j + 1] > g.t[j])) throw ParameterOutOfRange("grid nodes must increase strictly");
    return g;
}

NormSuite norms_periodic(double p, double mu, double s0, double s1, double radius) {
    NormSuite ns;
    ns.p = p;
    ns.mu = mu;
    ns.s0 = s0;
    ns.s1 = s1;
    ns.sobolev = [radius](const std::vector<double>& u, double s, double pp) {
        const int n = static_cast<int>(u.size());
        TrigSeries f = trig_analyze(u);
        for (int k = 0; k <= f.max_mode(); ++k) {
            const double lam = (k / radius) * (k / radius);
            const double m = std::pow(1.0 + lam, 0.5 * s);
            f.c[k] *= m;
            f.s[k] *= m;
        }
        const std::vector<double> v = trig_synthesize(f, n);
        double acc = 0.0;
        for (double x : v) acc += std::pow(std::fabs(x), pp);
        acc *= 2.0 * kPi * radius / n;
        return std::pow(acc, 1.0 / pp);
    };
    return ns;
}

NormSuite norms_dirichlet_1d(double p, double mu, double s0, double s1) {
    NormSuite ns;
    ns.p = p;
    ns.mu = mu;
    ns.s0 = s0;
    ns.s1 = s1;
    ns.sobolev = [](const std::vector<double>& u, double s, double pp) {
        const int m = static_cast<int>(u.size()); // interior nodes of (0,1)
        const double h = 1.0 / (m + 1);
        std::vector<double> c(m, 0.0);
        for (int k = 1; k <= m; ++k) {
            double acc = 0.0;
            for (int j = 1; j <= m; ++j) acc += u[j - 1] * std::sin(k * kPi * j * h);
            c[k - 1] = 2.0 * h * acc;
        }
        std::vector<double> v(m, 0.0);
        for (int j = 1; j <= m; ++j) {
            double acc = 0.0;
            for (int k = 1; k <= m; ++k)
                acc += std::pow(1.0 + (k * kPi) * (k * kPi), 0.5 * s) * c[k - 1] *
                       std::sin(k * kPi * j * h);
            v[j - 1] = acc;
        }
        double acc = 0.0;
        for (double x : v) acc += std::pow(std::fabs(x), pp);
        acc *= h;
        return std::pow(acc, 1.0 / pp);
    };
    return ns;
}

NormSuite norms_scalar(double p, double mu) {
    NormSuite ns;
    ns.p = p;
    ns.mu = mu;
    ns.s0 = 0.0;
    ns.s1 = 0.0;
    ns.sobolev = [](const std::vector<double>& u, double, double) {
        double m = 0.0;
        for (double v : u) m = std::max(m, std::fabs(v));
        return m;
    };
    return ns;
}

namespace {

double space_norm(const NormSuite& ns, SpaceSel sel, const std::vector<double>& u) {
    switch (sel) {
        case SpaceSel::X0: return ns.x0(u);
        case SpaceSel::X1: return ns.x1(u);
        case SpaceSel::XGammaMu: return ns.xgamma_mu(u);
        case SpaceSel::XGamma: return ns.xgamma(u);
    }
    return 0.0;
}

double weighted_time_lp(const std::vector<double>& values, const WeightedGrid& grid, double p,
                        double mu) {
    const int n = grid.steps;
    auto w = [&](int j) { return std::pow(grid.t[j], (1.0 - mu) * p) * std::pow(values[j], p); };
    double acc = w(1) * (grid.t[1] - grid.t[0]); // right endpoint on the first cell
    for (int j = 1; j < n; ++j) acc += 0.5 * (w(j) + w(j + 1)) * grid.dt(j);
    return std::pow(acc, 1.0 / p);
}

} // namespace

double weighted_norm(const std::vector<std::vector<double>>& states, const WeightedGrid& grid,
                     SpaceSel space, const NormSuite& norms) {
    if (static_cast<int>(states.size()) != grid.steps + 1)
        throw GridMismatch("trajectory is not aligned with the grid");
    std::vector<double> vals(states.size());
    for (size_t j = 0; j < states.size(); ++j) vals[j] = space_norm(norms, space, states[j]);
    return weighted_time_lp(vals, grid, norms.p, norms.mu);
}

double e0_norm(const std::vector<std::vector<double>>& states, const WeightedGrid& grid,
               const NormSuite& norms) {
    return weighted_norm(states, grid, SpaceSel::X0, norms);
}

double e1_norm(const std::vector<std::vector<double>>& states, const WeightedGrid& grid,
               const NormSuite& norms) {
    if (static_cast<int>(states.size()) != grid.steps + 1)
        throw GridMismatch("trajectory is not aligned with the grid");
    std::vector<double> dvals(states.size(), 0.0);
    for (int j = 1; j <= grid.steps; ++j) {
        const std::vector<double> du = sub(states[j], states[j - 1]);
        dvals[j] = norms.x0(du) / grid.dt(j - 1);
    }
    dvals[0] = dvals[1]; // one-sided stencil at the first node
    const double udot = weighted_time_lp(dvals, grid, norms.p, norms.mu);
    return weighted_norm(states, grid, SpaceSel::X0, norms) + udot +
           weighted_norm(states, grid, SpaceSel::X1, norms);
}

double sigma_factor(double T, double p, double mu) {
    if (!(T > 0.0)) throw ParameterOutOfRange("sigma_factor requires T > 0");
    if (!(p > 1.0)) throw ParameterOutOfRange("sigma_factor requires p > 1");
    if (!(mu > 1.0 / p && mu <= 1.0))
        throw ParameterOutOfRange("sigma_factor requires mu in (1/p, 1]");
    return std::pow(1.0 + (1.0 - mu) * p, -1.0 / p) * std::pow(T, 1.0 / p + 1.0 - mu);
}

double compute_mu0(int n, double p, Mu0Kind kind) {
    if (kind == Mu0Kind::SecondOrder) {
        if (!(p > n + 2)) throw ParameterOutOfRange("second-order case requires p > n + 2");
        return 0.5 + (n + 2) / (2.0 * p);
    }
    if (!(p > (n + 3) / 2.0)) throw ParameterOutOfRange("interface case requires p > (n + 3)/2");
    return 1.0 / 3.0 + (n + 3) / (3.0 * p);
}

namespace {

class ShiftedProblem final : public QuasilinearProblem {
  public:
    ShiftedProblem(std::shared_ptr<const QuasilinearProblem> base, double kappa)
        : base_(std::move(base)), kappa_(kappa) {}

    int dim() const override { return base_->dim(); }

    std::vector<double> apply_A(const std::vector<double>& v,
                                const std::vector<double>& u) const override {
        return axpy(base_->apply_A(v, u), kappa_, u);
    }

    std::vector<double> apply_F(const std::vector<double>& v) const override {
        return axpy(base_->apply_F(v), kappa_, v);
    }

    std::vector<double> linear_solve(const std::vector<double>& v0, double dt,
                                     const std::vector<double>& rhs) const override {
        const double scale = 1.0 + kappa_ * dt;
        std::vector<double> r(rhs);
        for (double& x : r) x /= scale;
        return base_->linear_solve(v0, dt / scale, r);
    }

    const NormSuite& norms() const override { return base_->norms(); }

    bool admissible(const std::vector<double>& s) const override { return base_->admissible(s); }

  private:
    std::shared_ptr<const QuasilinearProblem> base_;
    double kappa_;
};

// solve u' + A(u1) u = g(t), u(0) = u1 by implicit Euler; g given at the
// grid nodes (g[0] unused), g == nullptr means the homogeneous problem.
std::vector<std::vector<double>> frozen_solve(const QuasilinearProblem& pb,
                                              const std::vector<double>& u1,
                                              const WeightedGrid& grid,
                                              const std::vector<std::vector<double>>* g) {
    std::vector<std::vector<double>> u(grid.steps + 1);
    u[0] = u1;
    for (int j = 0; j < grid.steps; ++j) {
        std::vector<double> rhs = u[j];
        if (g) rhs = axpy(rhs, grid.dt(j), (*g)[j + 1]);
        u[j + 1] = pb.linear_solve(u1, grid.dt(j), rhs);
    }
    return u;
}

void estimate_lipschitz(const QuasilinearProblem& pb, const std::vector<double>& u1,
                        ContractionDiagnostics& diag) {
    const int n = pb.dim();
    const double eps = 1e-6 * (1.0 + sup_norm(u1));
    std::vector<double> v(n, 0.0);
    for (int i = 0; i < n; ++i) v[i] = std::cos(1.0 + 7.0 * i); // fixed generic direction
    double vnorm = pb.norms().x1(v);
    if (vnorm == 0.0) vnorm = 1.0;
    for (int probe = 0; probe < 3; ++probe) {
        std::vector<double> w1 = u1;
        for (int i = 0; i < n; ++i) w1[i] += eps * std::sin(0.5 + probe + 3.0 * i);
        const double dw = pb.norms().xgamma_mu(sub(w1, u1));
        if (dw == 0.0) continue;
        const double da = pb.norms().x0(sub(pb.apply_A(w1, v), pb.apply_A(u1, v)));
        const double df = pb.norms().x0(sub(pb.apply_F(w1), pb.apply_F(u1)));
        diag.lipschitz_A = std::max(diag.lipschitz_A, da / (dw * vnorm));
        diag.lipschitz_F = std::max(diag.lipschitz_F, df / dw);
    }
}

} // namespace

std::shared_ptr<QuasilinearProblem> spectral_shift(std::shared_ptr<const QuasilinearProblem> base,
                                                   double kappa) {
    if (kappa < 0.0) throw ParameterOutOfRange("spectral shift must be nonnegative");
    return std::make_shared<ShiftedProblem>(std::move(base), kappa);
}

PicardResult picard_window(const QuasilinearProblem& problem, const std::vector<double>& u1,
                           const WeightedGrid& grid, const PicardOptions& opts) {
    if (static_cast<int>(u1.size()) != problem.dim())
        throw GridMismatch("initial state dimension mismatch");
    if (!problem.admissible(u1)) throw ConstraintViolation("initial state is not admissible");

    const NormSuite& ns = problem.norms();
    double T = grid.horizon;
    for (int halving = 0; halving <= opts.max_halvings; ++halving) {
        const WeightedGrid g = WeightedGrid::make(T, grid.steps, grid.p, grid.mu, grid.grading);
        const std::vector<std::vector<double>> ref = frozen_solve(problem, u1, g, nullptr);
        std::vector<std::vector<double>> v = ref;

        ContractionDiagnostics diag;
        diag.window = T;
        diag.halvings = halving;

        double d_prev = -1.0;
        bool converged = false;
        const double scale = std::max(1.0, e1_norm(ref, g, ns));

        for (int it = 1; it <= opts.max_iterations; ++it) {
            std::vector<std::vector<double>> rhs(g.steps + 1);
            for (int j = 1; j <= g.steps; ++j) {
                // F(v) + (A(u1) - A(v)) v
                std::vector<double> r = problem.apply_F(v[j]);
                r = axpy(r, 1.0, problem.apply_A(u1, v[j]));
                r = axpy(r, -1.0, problem.apply_A(v[j], v[j]));
                rhs[j] = std::move(r);
            }
            std::vector<std::vector<double>> u = frozen_solve(problem, u1, g, &rhs);
            for (int j = 1; j <= g.steps; ++j)
                if (!problem.admissible(u[j]))
                    throw ConstraintViolation("picard iterate left the admissible set");

            std::vector<std::vector<double>> diff(g.steps + 1);
            for (int j = 0; j <= g.steps; ++j) diff[j] = sub(u[j], v[j]);
            const double d = e1_norm(diff, g, ns);
            diag.iterations = it;
            if (!std::isfinite(d)) break; // iterate blew up: halve the window
            std::vector<std::vector<double>> dev(g.steps + 1);
            for (int j = 0; j <= g.steps; ++j) dev[j] = sub(u[j], ref[j]);
            diag.radius = std::max(diag.radius, e1_norm(dev, g, ns));
            if (d_prev > 1000.0 * opts.tol * scale)
                diag.kappa_hat = std::max(diag.kappa_hat, d / d_prev);
            v = std::move(u);
            if (d <= opts.tol * scale) { converged = true; break; }
            if (it >= 3 && d_prev > 0.0 && d > d_prev) break; // diverging: halve the window
            d_prev = d;
        }

        if (converged && diag.kappa_hat < 1.0) {
            if (opts.estimate_lipschitz) estimate_lipschitz(problem, u1, diag);
            PicardResult res;
            res.states = std::move(v);
            res.grid = g;
            res.diagnostics = diag;
            if (opts.estimate_continuous_dependence) {
                std::vector<double> u1p = u1;
                for (size_t i = 0; i < u1p.size(); ++i)
                    u1p[i] += opts.dependence_probe * std::cos(0.3 + 2.0 * i);
                PicardOptions probe_opts = opts;
                probe_opts.estimate_continuous_dependence = false;
                probe_opts.estimate_lipschitz = false;
                probe_opts.max_halvings = 0; // same window as the base solution
                const PicardResult pert = picard_window(problem, u1p, g, probe_opts);
                std::vector<std::vector<double>> diff(g.steps + 1);
                for (int j = 0; j <= g.steps; ++j) diff[j] = sub(pert.states[j], res.states[j]);
                const double d0 = ns.xgamma_mu(sub(u1p, u1));
                res.diagnostics.c_hat = d0 > 0.0 ? e1_norm(diff, g, ns) / d0 : 0.0;
                res.diagnostics.epsilon_ball = opts.dependence_probe;
            }
            return res;
        }
        T *= 0.5;
    }
    throw NoContraction("window floor reached without a contracting map");
}

ContinuationResult continue_solution(const QuasilinearProblem& problem,
                                     const std::vector<double>& u0, double horizon,
                                     const GridPolicy& policy, const PicardOptions& opts) {
    ContinuationResult out;
    out.times.push_back(0.0);
    out.states.push_back(u0);

    double t_cur = 0.0;
    double window = policy.window;
    std::vector<double> state = u0;
    bool first = true;
    while (t_cur < horizon * (1.0 - 1e-12)) {
        if (static_cast<int>(out.windows.size()) >= policy.max_windows) {
            out.marker = ContinuationMarker::FiniteTimeBreakdown;
            out.end_time = t_cur;
            out.breakdown_estimate = t_cur;
            out.cause = "window budget exhausted";
            return out;
        }
        const double T = std::min(window, horizon - t_cur);
        const double mu = first ? policy.mu : 1.0;
        const double q = first ? policy.grading : 1.0;
        const WeightedGrid grid = WeightedGrid::make(T, policy.steps, policy.p, mu, q);
        PicardResult res;
        try {
            res = picard_window(problem, state, grid, opts);
        } catch (const NoContraction&) {
            out.marker = ContinuationMarker::FiniteTimeBreakdown;
            out.end_time = t_cur;
            out.breakdown_estimate = t_cur + T * std::pow(0.5, opts.max_halvings);
            out.cause = "no contraction at the window floor";
            return out;
        }
        for (int j = 1; j <= res.grid.steps; ++j) {
            out.times.push_back(t_cur + res.grid.t[j]);
            out.states.push_back(res.states[j]);
        }
        out.windows.push_back(res.diagnostics);
        t_cur += res.grid.horizon;
        state = res.states.back();
        first = false;
        if (sup_norm(state) > policy.blowup_threshold) {
            out.marker = ContinuationMarker::FiniteTimeBreakdown;
            out.end_time = t_cur;
            out.breakdown_estimate = t_cur;
            out.cause = "state norm passed the blowup threshold";
            return out;
        }
        window = std::min(policy.window, 2.0 * res.diagnostics.window);
    }
    out.marker = ContinuationMarker::HorizonReached;
    out.end_time = t_cur;
    return out;
}

std::vector<double> semi_implicit_step(const QuasilinearProblem& problem,
                                       const std::vector<double>& u, double dt) {
    const std::vector<double> rhs = axpy(u, dt, problem.apply_F(u));
    return problem.linear_solve(u, dt, rhs);
}

} // namespace mslab
