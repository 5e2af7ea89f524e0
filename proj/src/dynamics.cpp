#include "mslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace mslab {

namespace {

const double kPi = std::acos(-1.0);

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

struct ChannelSample {
    double perimeter = 0.0;
    double area = 0.0;
    double residual = 0.0;
    double ball_radius = 0.0;
    double eta = 0.0;
    double xgamma = 0.0;
    double dissipation = 0.0;
};

// eta and the X_gamma proxy are measured over the least-squares fitted circle
// so the channels stay continuous across reparameterization events; the
// current base is the fallback when the canonical parameterization is not
// available.
ChannelSample sample_channels(const MsQuasilinearProblem& pb, const std::vector<double>& rho,
                              const MsVectorFieldEval& ev, bool canonical) {
    ChannelSample ch;
    ch.perimeter = ev.realized.perimeter();
    ch.area = ev.realized.enclosed_area();
    ch.residual = sup_norm(ev.rho_dot);
    ch.dissipation = ev.dissipation;
    ch.ball_radius = tube_and_ball(ev.realized, pb.container()).r_ball;

    bool have_canonical = false;
    if (canonical) {
        try {
            const EquilibriumFit fit = fit_equilibrium(ev.realized);
            const TubeData ft = circle_tube(fit.center, fit.radius, pb.container());
            const ReferenceCurve fc = build_reference_curve(
                CurveSpec::circle(fit.center, fit.radius, ev.realized.n), pb.container());
            const HeightField hf = reparameterize(ev.realized, fc, ft);
            const NormSuite ns = norms_periodic(pb.norms().p, pb.norms().mu, pb.norms().s0,
                                                pb.norms().s1, fit.radius);
            ch.eta = 0.3 * ft.a - sup_norm(hf.rho);
            ch.xgamma = ns.xgamma(hf.rho);
            have_canonical = true;
        } catch (const Error&) {
            have_canonical = false;
        }
    }
    if (!have_canonical) {
        ch.eta = 0.3 * pb.tube().a - sup_norm(rho);
        ch.xgamma = pb.norms().xgamma(rho);
    }
    return ch;
}

void push_channels(Trajectory& tr, double t, const MsSnapshot& snap, const ChannelSample& ch) {
    tr.times.push_back(t);
    tr.snapshots.push_back(snap);
    tr.perimeter.push_back(ch.perimeter);
    tr.area.push_back(ch.area);
    tr.residual.push_back(ch.residual);
    tr.ball_radius.push_back(ch.ball_radius);
    tr.eta.push_back(ch.eta);
    tr.xgamma_norm.push_back(ch.xgamma);
    tr.dissipation.push_back(ch.dissipation);
}

std::optional<StopReason> breach(const ChannelSample& ch, const MonitorThresholds& mon,
                                 double tube_a, std::string& detail) {
    if (!std::isfinite(ch.xgamma) || ch.xgamma > mon.norm_max) {
        detail = "norm monitor passed M";
        return StopReason::NormBlowup;
    }
    if (ch.ball_radius < mon.ball_min) {
        detail = "ball-condition radius fell below r";
        return StopReason::BallConditionBreach;
    }
    if (ch.eta < mon.eta_factor * tube_a) {
        detail = "height margin eta exhausted";
        return StopReason::EtaMarginBreach;
    }
    return std::nullopt;
}

struct ReparamOutcome {
    MsState state;
    bool changed = false;
};

ReparamOutcome reparameterize_if_needed(const MsState& state) {
    const HeightFieldStatus st = height_field_status(state.field());
    if (st.within_margin) return {state, false};
    const ReferenceCurve realized = realize_interface(state.field());
    const EquilibriumFit fit = fit_equilibrium(realized);
    const Container& cont = state.container;
    const TubeData ft = circle_tube(fit.center, fit.radius, cont);
    const ReferenceCurve fc =
        build_reference_curve(CurveSpec::circle(fit.center, fit.radius, realized.n), cont);
    const HeightField hf = reparameterize(realized, fc, ft);
    MsState out;
    out.container = cont;
    out.sigma = fc;
    out.tube = ft;
    out.rho = hf.rho;
    // geometry preservation check: new nodes must lie on the old interface
    const ReferenceCurve re = realize_interface(out.field());
    for (int j = 0; j < re.n; j += std::max(1, re.n / 32)) {
        const Projection pr = signed_distance_project(realized, re.p[j]);
        if (std::fabs(pr.d) > 1e-8)
            throw TubeViolation("reparameterization failed to preserve the interface");
    }
    return {out, true};
}

} // namespace

MsState snapshot_state(const Container& container, const MsSnapshot& snap) {
    return make_ms_state(container, snap.center, snap.radius,
                         static_cast<int>(snap.rho.size()), snap.rho);
}

Trajectory evolve_ms(const MsState& initial, const EvolveConfig& config) {
    Trajectory tr;
    tr.is_interface = true;
    tr.container = initial.container;

    MsState state = initial;
    auto problem = ms_problem(state.container, state.sigma, config.p, config.mu);

    auto snapshot_of = [](const MsState& s, double t) {
        MsSnapshot snap;
        snap.time = t;
        snap.center = s.sigma.circle_center();
        snap.radius = s.sigma.circle_radius();
        snap.rho = s.rho;
        return snap;
    };

    auto record = [&](double t) -> std::optional<StopReason> {
        const MsVectorFieldEval ev = problem->field_eval(state.rho);
        const ChannelSample ch =
            sample_channels(*problem, state.rho, ev, config.canonical_channels);
        push_channels(tr, t, snapshot_of(state, t), ch);
        std::string detail;
        const auto b = breach(ch, config.monitors, problem->tube().a, detail);
        if (b) tr.stop_detail = detail;
        return b;
    };

    auto maybe_recenter = [&](double) {
        if (!config.allow_reparameterization) return;
        const ReparamOutcome ro = reparameterize_if_needed(state);
        if (ro.changed) {
            state = ro.state;
            problem = ms_problem(state.container, state.sigma, config.p, config.mu);
            tr.reparam_events.push_back(static_cast<int>(tr.times.size()) - 1);
        }
    };

    try {
        if (config.mode == EvolveMode::SemiImplicit) {
            const double dt = config.horizon / config.steps;
            for (int s = 0; s <= config.steps; ++s) {
                const double t = s * dt;
                if (auto b = record(t)) { tr.stop = *b; return tr; }
                if (s == config.steps) break;
                maybe_recenter(t);
                state.rho = semi_implicit_step(*problem, state.rho, dt);
            }
        } else {
            double t = 0.0;
            if (auto b = record(0.0)) { tr.stop = *b; return tr; }
            while (t < config.horizon * (1.0 - 1e-12)) {
                // re-center first so drifted states re-enter the admissible set
                maybe_recenter(t);
                const double T = std::min(config.window, config.horizon - t);
                const WeightedGrid grid = WeightedGrid::make(
                    T, config.window_steps, config.p, t == 0.0 ? config.mu : 1.0,
                    t == 0.0 ? config.grading : 1.0);
                PicardResult res;
                try {
                    res = picard_window(*problem, state.rho, grid);
                } catch (const NoContraction& e) {
                    tr.stop = StopReason::NoContractionStop;
                    tr.stop_detail = e.what();
                    return tr;
                } catch (const ConstraintViolation& e) {
                    tr.stop = StopReason::TubeViolationStop;
                    tr.stop_detail = e.what();
                    return tr;
                }
                tr.windows.push_back(res.diagnostics);
                for (int j = 1; j <= res.grid.steps; ++j) {
                    state.rho = res.states[j];
                    if (auto b = record(t + res.grid.t[j])) { tr.stop = *b; return tr; }
                }
                t += res.grid.horizon;
            }
        }
    } catch (const TubeViolation& e) {
        tr.stop = StopReason::TubeViolationStop;
        tr.stop_detail = e.what();
        return tr;
    }
    tr.stop = StopReason::HorizonReached;
    return tr;
}

Trajectory evolve_quasilinear(const QuasilinearProblem& problem, const std::vector<double>& u0,
                              const EvolveConfig& config) {
    Trajectory tr;
    tr.is_interface = false;
    const NormSuite& ns = problem.norms();

    auto record = [&](double t, const std::vector<double>& u, double res) {
        tr.times.push_back(t);
        tr.states.push_back(u);
        tr.x0_norm.push_back(ns.x0(u));
        tr.xgamma_norm.push_back(ns.xgamma(u));
        tr.residual.push_back(res);
    };

    if (config.mode == EvolveMode::Picard) {
        GridPolicy policy;
        policy.window = config.window;
        policy.steps = config.window_steps;
        policy.grading = config.grading;
        policy.p = config.p;
        policy.mu = config.mu;
        policy.blowup_threshold = config.monitors.norm_max;
        const ContinuationResult res = continue_solution(problem, u0, config.horizon, policy);
        for (size_t j = 0; j < res.times.size(); ++j) {
            double r = 0.0;
            if (j > 0) {
                std::vector<double> du(res.states[j].size());
                for (size_t i = 0; i < du.size(); ++i)
                    du[i] = res.states[j][i] - res.states[j - 1][i];
                r = sup_norm(du) / (res.times[j] - res.times[j - 1]);
            }
            record(res.times[j], res.states[j], r);
        }
        tr.windows = res.windows;
        tr.stop = res.marker == ContinuationMarker::HorizonReached ? StopReason::HorizonReached
                                                                   : StopReason::NoContractionStop;
        tr.stop_detail = res.cause;
        return tr;
    }

    const double dt = config.horizon / config.steps;
    std::vector<double> u = u0;
    record(0.0, u, 0.0);
    for (int s = 0; s < config.steps; ++s) {
        const std::vector<double> next = semi_implicit_step(problem, u, dt);
        std::vector<double> du(next.size());
        for (size_t i = 0; i < du.size(); ++i) du[i] = next[i] - u[i];
        u = next;
        record((s + 1) * dt, u, sup_norm(du) / dt);
        if (!std::isfinite(ns.x0(u)) || ns.xgamma(u) > config.monitors.norm_max) {
            tr.stop = StopReason::NormBlowup;
            tr.stop_detail = "norm monitor passed M";
            return tr;
        }
    }
    tr.stop = StopReason::HorizonReached;
    return tr;
}

MsState maybe_reparameterize(const MsState& state) {
    return reparameterize_if_needed(state).state;
}

LjapunovTrace ljapunov_trace(const Trajectory& traj) {
    if (!traj.is_interface) throw ParameterOutOfRange("ljapunov trace needs an interface run");
    LjapunovTrace lt;
    lt.times = traj.times;
    lt.perimeter = traj.perimeter;
    lt.dissipation = traj.dissipation;
    lt.nonincreasing = true;
    for (size_t j = 0; j + 1 < traj.times.size(); ++j) {
        const double dphi = traj.perimeter[j + 1] - traj.perimeter[j];
        lt.max_increase = std::max(lt.max_increase, dphi);
        if (dphi > 1e-8) lt.nonincreasing = false;
        const double dt = traj.times[j + 1] - traj.times[j];
        lt.max_defect = std::max(lt.max_defect, std::fabs(dphi / dt + traj.dissipation[j]));
    }
    return lt;
}

EquilibriumFit fit_equilibrium(const ReferenceCurve& curve) {
    // least-squares circle: |p|^2 = 2 c . p + (R^2 - |c|^2)
    DenseMatrix m(3);
    std::vector<double> rhs(3, 0.0);
    for (const Vec2& q : curve.p) {
        const double row[3] = {2.0 * q.x, 2.0 * q.y, 1.0};
        const double target = norm2(q);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m(i, j) += row[i] * row[j];
            rhs[i] += row[i] * target;
        }
    }
    const std::vector<double> sol = lu_solve(lu_factor(m), rhs);
    EquilibriumFit fit;
    fit.center = {sol[0], sol[1]};
    fit.radius = std::sqrt(std::max(0.0, sol[2] + norm2(fit.center)));
    for (const Vec2& q : curve.p)
        fit.residual = std::max(fit.residual, std::fabs(dist(q, fit.center) - fit.radius));
    return fit;
}

RateFit exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                         double lo_factor, double span) {
    if (times.size() != values.size() || times.size() < 2)
        throw ParameterOutOfRange("rate fit needs an aligned series");
    RateFit fit;
    const double d_final = values.back();
    double lo = lo_factor * d_final;
    double hi = span * lo;
    std::vector<size_t> idx;
    for (size_t j = 0; j < values.size(); ++j)
        if (values[j] >= lo && values[j] <= hi) idx.push_back(j);
    if (idx.size() < 10) {
        idx.clear();
        const size_t take = std::min<size_t>(values.size(), std::max<size_t>(10, values.size() / 4));
        for (size_t j = values.size() - take; j < values.size(); ++j) idx.push_back(j);
    }
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, syy = 0.0;
    for (size_t j : idx) {
        if (!(values[j] > 0.0)) throw NonPositiveSeries("rate fit window touches d <= 0");
        const double x = times[j], y = std::log(values[j]);
        st += x;
        sy += y;
        stt += x * x;
        sty += x * y;
        syy += y * y;
    }
    const double n = static_cast<double>(idx.size());
    const double det = n * stt - st * st;
    if (det <= 0.0) throw ParameterOutOfRange("degenerate time window in rate fit");
    const double slope = (n * sty - st * sy) / det;
    fit.omega = -slope;
    fit.samples = static_cast<int>(idx.size());
    const double ss_tot = syy - sy * sy / n;
    if (ss_tot < 1e-24) {
        fit.quality = 0.0; // flat series: flagged non-convergent
        fit.omega = 0.0;
        return fit;
    }
    double ss_res = 0.0;
    const double intercept = (sy - slope * st) / n;
    for (size_t j : idx) {
        const double e = std::log(values[j]) - (intercept + slope * times[j]);
        ss_res += e * e;
    }
    fit.quality = 1.0 - ss_res / ss_tot;
    return fit;
}

LinearizationReport linearize_at(const MsState& state, double fd_step, int modes) {
    if (ms_equilibrium_residual(state) >= 1e-6)
        throw NotAnEquilibrium("linearization requires residual < 1e-6");
    const int n = state.sigma.n;
    if (2 * modes >= n) throw ParameterOutOfRange("too many modes for the node count");

    LinearizationReport rep;
    rep.modes = modes;
    const int dim = 2 * modes + 1;
    rep.matrix = DenseMatrix(dim);

    auto direction = [&](int col) {
        std::vector<double> e(n);
        if (col == 0) {
            e.assign(n, 1.0);
            return e;
        }
        const int k = (col + 1) / 2;
        const bool is_cos = (col % 2) == 1;
        for (int j = 0; j < n; ++j) {
            const double t = 2.0 * kPi * j / n;
            e[j] = is_cos ? std::cos(k * t) : std::sin(k * t);
        }
        return e;
    };

    auto field_at = [&](const std::vector<double>& rho) {
        MsState s = state;
        s.rho = rho;
        return ms_vector_field(s).rho_dot;
    };

    for (int col = 0; col < dim; ++col) {
        const std::vector<double> e = direction(col);
        std::vector<double> plus(state.rho), minus(state.rho);
        for (int j = 0; j < n; ++j) {
            plus[j] += fd_step * e[j];
            minus[j] -= fd_step * e[j];
        }
        const std::vector<double> fp = field_at(plus);
        const std::vector<double> fm = field_at(minus);
        std::vector<double> col_field(n);
        // A0 is the linearization of minus the vector field
        for (int j = 0; j < n; ++j) col_field[j] = -(fp[j] - fm[j]) / (2.0 * fd_step);
        const TrigSeries f = trig_analyze(col_field);
        rep.matrix(0, col) = f.c[0];
        for (int k = 1; k <= modes; ++k) {
            rep.matrix(2 * k - 1, col) = f.c[k];
            rep.matrix(2 * k, col) = f.s[k];
        }
    }

    DenseMatrix sym(dim);
    double max_asym = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            sym(i, j) = 0.5 * (rep.matrix(i, j) + rep.matrix(j, i));
            max_asym = std::max(max_asym, std::fabs(rep.matrix(i, j) - rep.matrix(j, i)));
        }
    rep.eigenvalues = jacobi_eigenvalues(sym);
    for (double ev : rep.eigenvalues) rep.spectral_radius = std::max(rep.spectral_radius, std::fabs(ev));
    rep.asymmetry = rep.spectral_radius > 0.0 ? max_asym / rep.spectral_radius : 0.0;

    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) acc += rep.matrix(i, c) * rep.matrix(i, c);
        rep.kernel_residuals[c] = std::sqrt(acc);
    }
    for (double ev : rep.eigenvalues)
        if (std::fabs(ev) < 1e-6 * rep.spectral_radius) ++rep.kernel_dim;
    bool rest_positive = true;
    for (double ev : rep.eigenvalues)
        if (std::fabs(ev) >= 1e-6 * rep.spectral_radius && ev <= 0.0) rest_positive = false;
    // eigenvalues of the symmetric part bound the real parts of the spectrum,
    // so kernel dimension 3 plus a positive remainder certifies normal
    // stability of the equilibrium manifold of circles
    rep.normally_stable = rep.kernel_dim == 3 && rest_positive;
    return rep;
}

double mode_eigenvalue(const LinearizationReport& rep, int k) {
    if (k < 0 || k > rep.modes) throw ParameterOutOfRange("mode outside the retained range");
    if (k == 0) return rep.matrix(0, 0);
    return 0.5 * (rep.matrix(2 * k - 1, 2 * k - 1) + rep.matrix(2 * k, 2 * k));
}

OmegaLimitReport omega_limit_report(const Trajectory& traj) {
    if (!traj.is_interface) throw ParameterOutOfRange("omega-limit report needs an interface run");
    OmegaLimitReport rep;
    rep.final_residual = traj.residual.back();
    if (traj.stop != StopReason::HorizonReached) {
        rep.verdict = OmegaVerdict::NonConvergent;
        rep.cause = traj.stop_detail.empty() ? "run stopped before the horizon" : traj.stop_detail;
        return rep;
    }
    const MsState last = snapshot_state(traj.container, traj.snapshots.back());
    const ReferenceCurve final_curve = realize_interface(last.field());
    rep.limit = fit_equilibrium(final_curve);

    const ReferenceCurve limit_circle = build_reference_curve(
        CurveSpec::circle(rep.limit.center, rep.limit.radius, final_curve.n), traj.container);

    // distance-to-limit series on a subsample of the trajectory
    const size_t n = traj.snapshots.size();
    const size_t stride = std::max<size_t>(1, n / 400);
    std::vector<double> ts, ds;
    for (size_t j = 0; j < n; j += stride) {
        const MsState s = snapshot_state(traj.container, traj.snapshots[j]);
        const ReferenceCurve g = realize_interface(s.field());
        ts.push_back(traj.times[j]);
        ds.push_back(bundle_distance(g, limit_circle, 2));
    }
    bool rate_ok = true;
    try {
        rep.rate = exponential_rate(ts, ds);
    } catch (const Error&) {
        rate_ok = false;
    }
    if (rep.final_residual < 1e-6) {
        rep.verdict = OmegaVerdict::Converged;
    } else if (rate_ok && rep.rate.omega > 0.0 && rep.rate.quality > 0.5) {
        rep.verdict = OmegaVerdict::InProgress;
        rep.cause = "residual still above tolerance";
    } else {
        rep.verdict = OmegaVerdict::NonConvergent;
        rep.cause = "no decaying trend detected";
    }
    return rep;
}

} // namespace mslab
