#include "mslab/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mslab {

namespace {

class SecondOrderProblem final : public QuasilinearProblem {
  public:
    SecondOrderProblem(ScalarCoefficient a, ScalarCoefficient f, int m, double p, double mu)
        : a_(std::move(a)), f_(std::move(f)), m_(m), h_(1.0 / (m + 1)),
          norms_(norms_dirichlet_1d(p, mu, 0.0, 2.0)) {
        if (m < 3) throw ParameterOutOfRange("mesh needs at least 3 interior nodes");
        // weighted setups live above the critical weight
        if (mu < 1.0 && mu <= compute_mu0(1, p, Mu0Kind::SecondOrder))
            throw ParameterOutOfRange("mu at or below the critical weight");
    }

    int dim() const override { return m_; }

    std::vector<double> apply_A(const std::vector<double>& v,
                                const std::vector<double>& u) const override {
        check(v);
        check(u);
        std::vector<double> out(m_);
        for (int i = 0; i < m_; ++i) {
            const double uxx = (right(u, i) - 2.0 * u[i] + left(u, i)) / (h_ * h_);
            out[i] = -coeff(v, i) * uxx;
        }
        return out;
    }

    std::vector<double> apply_F(const std::vector<double>& v) const override {
        check(v);
        std::vector<double> out(m_);
        for (int i = 0; i < m_; ++i) out[i] = f_(v[i], grad(v, i));
        return out;
    }

    std::vector<double> linear_solve(const std::vector<double>& v0, double dt,
                                     const std::vector<double>& rhs) const override {
        check(v0);
        std::vector<double> sub(m_, 0.0), diag(m_, 0.0), super(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const double w = dt * coeff(v0, i) / (h_ * h_);
            diag[i] = 1.0 + 2.0 * w;
            if (i > 0) sub[i] = -w;
            if (i + 1 < m_) super[i] = -w;
        }
        return tridiag_solve(std::move(sub), std::move(diag), std::move(super), rhs);
    }

    const NormSuite& norms() const override { return norms_; }

  private:
    double left(const std::vector<double>& u, int i) const { return i > 0 ? u[i - 1] : 0.0; }
    double right(const std::vector<double>& u, int i) const { return i + 1 < m_ ? u[i + 1] : 0.0; }
    double grad(const std::vector<double>& u, int i) const {
        return (right(u, i) - left(u, i)) / (2.0 * h_);
    }
    double coeff(const std::vector<double>& v, int i) const {
        const double a = a_(v[i], grad(v, i));
        if (!(a > 0.0)) throw NonPositiveCoefficient("diffusion coefficient lost positivity");
        return a;
    }
    void check(const std::vector<double>& u) const {
        if (static_cast<int>(u.size()) != m_) throw GridMismatch("state size mismatch");
    }

    ScalarCoefficient a_, f_;
    int m_;
    double h_;
    NormSuite norms_;
};

} // namespace

std::shared_ptr<QuasilinearProblem> make_second_order(ScalarCoefficient a, ScalarCoefficient f,
                                                      int interior_nodes, double p, double mu) {
    return std::make_shared<SecondOrderProblem>(std::move(a), std::move(f), interior_nodes, p, mu);
}

MsState make_ms_state(const Container& container, Vec2 center, double radius, int nodes,
                      std::vector<double> rho) {
    MsState st;
    st.container = container;
    st.sigma = build_reference_curve(CurveSpec::circle(center, radius, nodes), container);
    st.tube = circle_tube(center, radius, container);
    if (static_cast<int>(rho.size()) != nodes) throw GridMismatch("height vector size mismatch");
    st.rho = std::move(rho);
    return st;
}

namespace {

// geometry bundle tied to one height vector over a fixed base
struct GeomEval {
    std::vector<double> v;
    ReferenceCurve realized;
    std::shared_ptr<TwoPhaseOperator> op;
    CurvatureSplit split;
    std::vector<double> kappa;  // curvature of the realized interface, K(v)
    std::vector<double> metric; // 1 / (nu_sigma . nu_gamma)
};

GeomEval make_geom_eval(const Container& container, const ReferenceCurve& sigma,
                        const TubeData& tube, const std::vector<double>& v) {
    GeomEval ge;
    ge.v = v;
    const HeightField hf{sigma, tube, v};
    ge.realized = realize_interface(hf);
    ge.op = std::make_shared<TwoPhaseOperator>(container, ge.realized);
    ge.split = split_curvature(hf);
    ge.kappa = curvature(hf);
    ge.metric.resize(sigma.n);
    for (int j = 0; j < sigma.n; ++j) {
        const double c = dot(sigma.normal[j], ge.realized.normal[j]);
        if (!(c > 0.05))
            throw TubeViolation("interface normal turned away from the reference normal");
        ge.metric[j] = 1.0 / c;
    }
    return ge;
}

class MsProblem final : public MsQuasilinearProblem {
  public:
    MsProblem(const Container& container, const ReferenceCurve& sigma, double p, double mu)
        : container_(container), sigma_(sigma),
          tube_(circle_tube(sigma.circle_center(), sigma.circle_radius(), container)),
          norms_(norms_periodic(p, mu, 1.0 - 1.0 / p, 4.0 - 1.0 / p, sigma.circle_radius())) {
        if (!sigma.is_circle()) throw UnsupportedBase("interface problem needs a circular base");
        if (!(mu > compute_mu0(2, p, Mu0Kind::MullinsSekerka) && mu <= 1.0))
            throw ParameterOutOfRange("mu must lie above the critical weight");
    }

    int dim() const override { return sigma_.n; }

    std::vector<double> apply_A(const std::vector<double>& v,
                                const std::vector<double>& u) const override {
        const GeomEval& ge = eval_at(v);
        std::vector<double> g = spectral_derivative(u, 2);
        for (int j = 0; j < sigma_.n; ++j) g[j] *= ge.split.second_order_coeff[j];
        std::vector<double> jump = ge.op->jump_of(g);
        for (int j = 0; j < sigma_.n; ++j) jump[j] *= ge.metric[j];
        return jump;
    }

    std::vector<double> apply_F(const std::vector<double>& v) const override {
        const GeomEval& ge = eval_at(v);
        std::vector<double> jump = ge.op->jump_of(ge.split.lower_order);
        for (int j = 0; j < sigma_.n; ++j) jump[j] *= ge.metric[j];
        return jump;
    }

    std::vector<double> linear_solve(const std::vector<double>& v0, double dt,
                                     const std::vector<double>& rhs) const override {
        if (frozen_v_ != v0) {
            frozen_v_ = v0;
            a_matrix_ = assemble_a(v0);
            step_lu_.clear();
        }
        auto it = step_lu_.find(dt);
        if (it == step_lu_.end()) {
            DenseMatrix m(sigma_.n);
            for (int i = 0; i < sigma_.n; ++i)
                for (int j = 0; j < sigma_.n; ++j)
                    m(i, j) = (i == j ? 1.0 : 0.0) + dt * a_matrix_(i, j);
            it = step_lu_.emplace(dt, lu_factor(m)).first;
        }
        return lu_solve(it->second, rhs);
    }

    const NormSuite& norms() const override { return norms_; }

    bool admissible(const std::vector<double>& v) const override {
        const HeightFieldStatus st = height_field_status(HeightField{sigma_, tube_, v});
        return st.within_margin;
    }

    MsVectorFieldEval field_eval(const std::vector<double>& rho) const override {
        const GeomEval& ge = eval_at(rho);
        MsVectorFieldEval ev;
        ev.curvature_data = ge.kappa;
        ev.realized = ge.realized;
        const TwoPhaseSolution sol = ge.op->solve(ge.kappa);
        ev.normal_velocity = sol.jump;
        ev.dissipation = dirichlet_energy(sol);
        ev.rho_dot.resize(sigma_.n);
        for (int j = 0; j < sigma_.n; ++j) ev.rho_dot[j] = sol.jump[j] * ge.metric[j];
        return ev;
    }

    const Container& container() const override { return container_; }
    const ReferenceCurve& sigma() const override { return sigma_; }
    const TubeData& tube() const override { return tube_; }

    const GeomEval& eval_at(const std::vector<double>& v) const {
        for (size_t i = 0; i < cache_.size(); ++i) {
            if (cache_[i].v == v) {
                if (i != 0) std::rotate(cache_.begin(), cache_.begin() + i, cache_.begin() + i + 1);
                return cache_.front();
            }
        }
        cache_.insert(cache_.begin(), make_geom_eval(container_, sigma_, tube_, v));
        if (cache_.size() > 3) cache_.pop_back();
        return cache_.front();
    }

  private:
    DenseMatrix assemble_a(const std::vector<double>& v0) const {
        const int n = sigma_.n;
        DenseMatrix a(n);
        std::vector<double> e(n, 0.0);
        for (int j = 0; j < n; ++j) {
            e.assign(n, 0.0);
            e[j] = 1.0;
            const std::vector<double> col = apply_A(v0, e);
            for (int i = 0; i < n; ++i) a(i, j) = col[i];
        }
        return a;
    }

    Container container_;
    ReferenceCurve sigma_;
    TubeData tube_;
    NormSuite norms_;
    mutable std::vector<GeomEval> cache_;
    mutable std::vector<double> frozen_v_;
    mutable DenseMatrix a_matrix_;
    mutable std::map<double, LuFactors> step_lu_;
};

} // namespace

MsVectorFieldEval ms_vector_field(const MsState& state) {
    const GeomEval ge = make_geom_eval(state.container, state.sigma, state.tube, state.rho);
    MsVectorFieldEval ev;
    ev.curvature_data = ge.kappa;
    ev.realized = ge.realized;
    const TwoPhaseSolution sol = ge.op->solve(ge.kappa);
    ev.normal_velocity = sol.jump;
    ev.dissipation = dirichlet_energy(sol);
    ev.rho_dot.resize(state.sigma.n);
    for (int j = 0; j < state.sigma.n; ++j) ev.rho_dot[j] = sol.jump[j] * ge.metric[j];
    return ev;
}

double ms_equilibrium_residual(const MsState& state) {
    const MsVectorFieldEval ev = ms_vector_field(state);
    double m = 0.0;
    for (double v : ev.rho_dot) m = std::max(m, std::fabs(v));
    return m;
}

std::shared_ptr<MsQuasilinearProblem> ms_problem(const Container& container,
                                                 const ReferenceCurve& sigma, double p, double mu) {
    return std::make_shared<MsProblem>(container, sigma, p, mu);
}

} // namespace mslab
