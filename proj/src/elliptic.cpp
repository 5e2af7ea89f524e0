#include "mslab/elliptic.hpp"

#include "mslab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mslab {

namespace {

const double kPi = std::acos(-1.0);

// Discrete weights for (1/2pi) * integral of ln(4 sin^2((t_i - s)/2)) f(s) ds,
// exact for trigonometric polynomials up to the grid bandwidth.
std::vector<double> log_kernel_weights(int n_nodes) {
    const int n = n_nodes / 2;
    std::vector<double> w(n_nodes);
    for (int d = 0; d < n_nodes; ++d) {
        double acc = 0.0;
        for (int m = 1; m < n; ++m) acc += std::cos(2.0 * kPi * m * d / n_nodes) / m;
        acc += std::cos(kPi * d) / (2.0 * n);
        w[d] = -2.0 * acc / n_nodes;
    }
    return w;
}

double image_q(Vec2 x, Vec2 y, double b) {
    return norm2(x) * norm2(y) - 2.0 * b * b * dot(x, y) + b * b * b * b;
}

} // namespace

TwoPhaseOperator::TwoPhaseOperator(const Container& container, const ReferenceCurve& interface)
    : container_(container), interface_(interface) {
    if (std::fabs(container.center.x) > 0.0 || std::fabs(container.center.y) > 0.0)
        throw ParameterOutOfRange("two-phase solver requires the container centered at the origin");
    const int n = interface.n;
    const double b = container.radius;

    double rmax = 0.0;
    for (const Vec2& x : interface.p) rmax = std::max(rmax, norm(x));
    if (b - rmax < 0.01 * b)
        throw IllConditioned("interface too close to the container wall");
    const double spacing = interface.perimeter() / n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 4; j < n; ++j) {
            const int sep = std::min(j - i, n - (j - i));
            if (sep < 4) continue;
            if (dist(interface.p[i], interface.p[j]) < 1.5 * spacing)
                throw IllConditioned("interface nearly touches itself");
        }
    }

    const std::vector<double> w = log_kernel_weights(n);
    DenseMatrix sys(n + 1);
    for (int i = 0; i < n; ++i) {
        const double ti = interface.node_theta(i);
        for (int j = 0; j < n; ++j) {
            double smooth;
            if (i == j) {
                smooth = -std::log(interface.speed[i]) / (2.0 * kPi);
            } else {
                const double tj = interface.node_theta(j);
                const double chord = dist(interface.p[i], interface.p[j]);
                const double sine = 2.0 * std::fabs(std::sin(0.5 * (ti - tj)));
                smooth = -std::log(chord / sine) / (2.0 * kPi);
            }
            const double qij = image_q(interface.p[i], interface.p[j], b);
            const double img = -(0.5 * std::log(qij) - std::log(b)) / (2.0 * kPi);
            const int d = (i - j + n) % n;
            sys(i, j) = (-0.5 * w[d] + (2.0 * kPi / n) * (smooth + img)) * interface.speed[j];
        }
        sys(i, n) = 1.0; // additive constant
    }
    for (int j = 0; j < n; ++j) sys(n, j) = (2.0 * kPi / n) * interface.speed[j];
    sys(n, n) = 0.0;
    lu_ = lu_factor(sys);

    flux_kernel_ = DenseMatrix(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 xi = interface.p[i];
        const Vec2 nui = interface.normal[i];
        for (int j = 0; j < n; ++j) {
            double self;
            if (i == j) {
                self = -interface.kappa[i] / (4.0 * kPi);
            } else {
                const Vec2 diff = xi - interface.p[j];
                self = -dot(nui, diff) / (2.0 * kPi * norm2(diff));
            }
            const Vec2 yj = interface.p[j];
            const double qij = image_q(xi, yj, b);
            const Vec2 grad{(norm2(yj) * xi.x - b * b * yj.x) / qij,
                            (norm2(yj) * xi.y - b * b * yj.y) / qij};
            const double img = -dot(nui, grad) / (2.0 * kPi);
            flux_kernel_(i, j) = (2.0 * kPi / n) * (self + img) * interface.speed[j];
        }
    }
}

std::vector<double> TwoPhaseOperator::solve_density(const std::vector<double>& g,
                                                    double* constant) const {
    const int n = interface_.n;
    if (static_cast<int>(g.size()) != n) throw GridMismatch("dirichlet data size mismatch");
    std::vector<double> rhs(n + 1, 0.0);
    for (int i = 0; i < n; ++i) rhs[i] = g[i];
    std::vector<double> sol = lu_solve(lu_, rhs);
    if (constant) *constant = sol[n];
    sol.resize(n);
    return sol;
}

TwoPhaseSolution TwoPhaseOperator::solve(const std::vector<double>& g) const {
    const int n = interface_.n;
    TwoPhaseSolution s;
    s.interface = interface_;
    s.container = container_;
    s.dirichlet = g;
    s.density = solve_density(g, &s.additive_constant);
    std::vector<double> mean_flux(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += flux_kernel_(i, j) * s.density[j];
        mean_flux[i] = acc;
    }
    s.flux_inner.resize(n);
    s.flux_outer.resize(n);
    s.jump.resize(n);
    for (int i = 0; i < n; ++i) {
        s.flux_inner[i] = mean_flux[i] + 0.5 * s.density[i];
        s.flux_outer[i] = mean_flux[i] - 0.5 * s.density[i];
        s.jump[i] = -s.density[i];
    }
    return s;
}

std::vector<double> TwoPhaseOperator::jump_of(const std::vector<double>& g) const {
    std::vector<double> phi = solve_density(g, nullptr);
    for (double& v : phi) v = -v;
    return phi;
}

DenseMatrix TwoPhaseOperator::dtn_matrix() const {
    const int n = interface_.n;
    DenseMatrix m(n);
    std::vector<double> e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        const std::vector<double> col = jump_of(e);
        for (int i = 0; i < n; ++i) m(i, j) = col[i];
    }
    return m;
}

double TwoPhaseSolution::evaluate(Vec2 x) const {
    const int n = interface.n;
    const double b = container.radius;
    double acc = additive_constant;
    for (int j = 0; j < n; ++j) {
        const Vec2 yj = interface.p[j];
        const double base = -std::log(dist(x, yj)) / (2.0 * kPi);
        const double img = -(0.5 * std::log(image_q(x, yj, b)) - std::log(b)) / (2.0 * kPi);
        acc += (2.0 * kPi / n) * interface.speed[j] * density[j] * (base + img);
    }
    return acc;
}

TwoPhaseSolution solve_two_phase(const Container& container, const ReferenceCurve& interface,
                                 const std::vector<double>& g) {
    return TwoPhaseOperator(container, interface).solve(g);
}

std::vector<double> dtn_jump(const Container& container, const ReferenceCurve& interface,
                             const std::vector<double>& g) {
    return TwoPhaseOperator(container, interface).jump_of(g);
}

double dirichlet_energy(const TwoPhaseSolution& sol) {
    const int n = sol.interface.n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
        acc += sol.dirichlet[j] * sol.jump[j] * sol.interface.speed[j];
    acc *= -2.0 * kPi / n;
    return std::max(acc, 0.0);
}

} // namespace mslab
