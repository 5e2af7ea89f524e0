#pragma once

#include "mslab/geometry.hpp"
#include "mslab/linalg.hpp"

#include <vector>

namespace mslab {

// Harmonic field in the container minus the interface, continuous across the
// interface with trace g, homogeneous Neumann data on the wall. Phase 1 is the
// region enclosed by the interface, phase 2 the rest.
struct TwoPhaseSolution {
    ReferenceCurve interface;
    Container container;
    std::vector<double> dirichlet;  // g at interface nodes
    std::vector<double> density;    // single-layer density; jump == -density
    double additive_constant = 0.0;
    std::vector<double> flux_inner; // one-sided d_nu u, phase-1 limit
    std::vector<double> flux_outer; // one-sided d_nu u, phase-2 limit
    std::vector<double> jump;       // flux_outer - flux_inner

    // Potential away from the interface (plain trapezoid sums; accuracy
    // degrades within a few node spacings of the interface).
    double evaluate(Vec2 x) const;
};

// Nystrom discretization for a fixed interface: single-layer potential with
// the Kussmaul-Martensen log-splitting on the interface plus the disk's
// Neumann image kernel, which enforces the wall condition exactly once the
// density has zero mean. The (n+1) x (n+1) system couples the density with an
// additive constant; it stays solvable at every container radius.
class TwoPhaseOperator {
  public:
    TwoPhaseOperator(const Container& container, const ReferenceCurve& interface);

    TwoPhaseSolution solve(const std::vector<double>& g) const;
    std::vector<double> jump_of(const std::vector<double>& g) const;

    // Dense matrix of g -> jump (one back-substitution per basis vector).
    DenseMatrix dtn_matrix() const;

    const ReferenceCurve& interface() const { return interface_; }

  private:
    std::vector<double> solve_density(const std::vector<double>& g, double* constant) const;

    Container container_;
    ReferenceCurve interface_;
    LuFactors lu_;           // factored Dirichlet system
    DenseMatrix flux_kernel_; // K' matrix: density -> mean normal derivative
};

TwoPhaseSolution solve_two_phase(const Container& container, const ReferenceCurve& interface,
                                 const std::vector<double>& g);

std::vector<double> dtn_jump(const Container& container, const ReferenceCurve& interface,
                             const std::vector<double>& g);

// integral of |grad u|^2 over both phases via the boundary identity
// -(integral of g * jump over the interface); nonnegative.
double dirichlet_energy(const TwoPhaseSolution& sol);

} // namespace mslab
