#include "mslab/linalg.hpp"

#include "mslab/errors.hpp"

#include <cmath>

namespace mslab {

LuFactors lu_factor(const DenseMatrix& m) {
    LuFactors f;
    f.n = m.n;
    f.lu = m.a;
    f.piv.resize(m.n);
    const int n = m.n;
    auto at = [&](int i, int j) -> double& { return f.lu[static_cast<size_t>(i) * n + j]; };
    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::fabs(at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::fabs(at(r, col));
            if (v > best) { best = v; p = r; }
        }
        if (best == 0.0) throw IllConditioned("singular matrix in LU factorization");
        f.piv[col] = p;
        if (p != col)
            for (int j = 0; j < n; ++j) std::swap(at(col, j), at(p, j));
        const double d = at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double l = at(r, col) / d;
            at(r, col) = l;
            for (int j = col + 1; j < n; ++j) at(r, j) -= l * at(col, j);
        }
    }
    return f;
}

std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& rhs) {
    if (static_cast<int>(rhs.size()) != f.n) throw ParameterOutOfRange("lu_solve rhs size mismatch");
    const int n = f.n;
    std::vector<double> x = rhs;
    auto at = [&](int i, int j) { return f.lu[static_cast<size_t>(i) * n + j]; };
    for (int col = 0; col < n; ++col)
        if (f.piv[col] != col) std::swap(x[col], x[f.piv[col]]);
    for (int col = 0; col < n; ++col)
        for (int r = col + 1; r < n; ++r) x[r] -= at(r, col) * x[col];
    for (int r = n - 1; r >= 0; --r) {
        for (int j = r + 1; j < n; ++j) x[r] -= at(r, j) * x[j];
        x[r] /= at(r, r);
    }
    return x;
}

std::vector<double> mat_vec(const DenseMatrix& m, const std::vector<double>& x) {
    std::vector<double> y(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m.n; ++j) acc += m(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<double> tridiag_solve(std::vector<double> sub, std::vector<double> diag,
                                  std::vector<double> super, std::vector<double> rhs) {
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * super[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
    return x;
}

std::vector<double> jacobi_eigenvalues(DenseMatrix m, DenseMatrix* vectors) {
    const int n = m.n;
    DenseMatrix v(n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-30 * (1.0 + std::fabs(m(0, 0)))) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double app = m(p, p), aqq = m(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m(order[j], order[j]) < m(order[i], order[i])) std::swap(order[i], order[j]);
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = m(order[i], order[i]);
    if (vectors) {
        *vectors = DenseMatrix(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) (*vectors)(k, i) = v(k, order[i]);
    }
    return ev;
}

} // namespace mslab
