#pragma once

#include <vector>

namespace mslab {

// Dense row-major matrix with LU solve, sized for the Nystrom systems
// (n <= ~600). Summation order is fixed; results are bit-reproducible.
struct DenseMatrix {
    int n = 0;
    std::vector<double> a; // row-major n*n

    DenseMatrix() = default;
    explicit DenseMatrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

struct LuFactors {
    int n = 0;
    std::vector<double> lu;
    std::vector<int> piv;

    bool valid() const { return n > 0; }
};

LuFactors lu_factor(const DenseMatrix& m); // throws IllConditioned on exact singularity
std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& rhs);

std::vector<double> mat_vec(const DenseMatrix& m, const std::vector<double>& x);

// Thomas algorithm for (sub, diag, super) systems; diag is overwritten copy-free
// for the caller (inputs by value).
std::vector<double> tridiag_solve(std::vector<double> sub, std::vector<double> diag,
                                  std::vector<double> super, std::vector<double> rhs);

// Cyclic Jacobi eigenvalue iteration for symmetric matrices. Returns
// eigenvalues sorted ascending; eigenvectors as columns if requested.
std::vector<double> jacobi_eigenvalues(DenseMatrix m, DenseMatrix* vectors = nullptr);

} // namespace mslab
