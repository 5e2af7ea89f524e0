#pragma once

#include "mslab/errors.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mslab {

// Graded time mesh t_j = T (j/N)^q with the weight parameters (p, mu) it is
// meant to serve. mu in (1/p, 1], p in (1, inf).
struct WeightedGrid {
    double horizon = 0.0;
    int steps = 0;
    double grading = 1.0;
    double p = 2.0;
    double mu = 1.0;
    std::vector<double> t;

    double dt(int j) const { return t[j + 1] - t[j]; }

    // grading <= 0 selects the default q = max(1, 2/(mu - 1/p)), which
    // resolves the t^{mu-1/p} initial layer admitted by the weight.
    static WeightedGrid make(double horizon, int steps, double p, double mu, double grading = 0.0);
};

// Discrete Sobolev-scale norms. The fractional order is realized through the
// problem's spectral basis (Fourier modes on a circle, sine modes on the
// Dirichlet interval) with multiplier (1 + lambda_k)^{s/2}, followed by the
// L_p norm in physical space.
struct NormSuite {
    double p = 2.0;
    double mu = 1.0;
    double s0 = 0.0;
    double s1 = 2.0;
    std::function<double(const std::vector<double>&, double s, double p)> sobolev;

    double order_gamma_mu() const { return s0 + (mu - 1.0 / p) * (s1 - s0); }
    double order_gamma() const { return s0 + (1.0 - 1.0 / p) * (s1 - s0); }

    double x0(const std::vector<double>& u) const { return sobolev(u, s0, p); }
    double x1(const std::vector<double>& u) const { return sobolev(u, s1, p); }
    double xgamma_mu(const std::vector<double>& u) const { return sobolev(u, order_gamma_mu(), p); }
    double xgamma(const std::vector<double>& u) const { return sobolev(u, order_gamma(), p); }
};

// Periodic states over a circle of the given radius (power-of-two size).
NormSuite norms_periodic(double p, double mu, double s0, double s1, double radius);
// Zero-boundary states on the unit interval, interior nodes only.
NormSuite norms_dirichlet_1d(double p, double mu, double s0, double s1);
// One-dimensional toy states.
NormSuite norms_scalar(double p, double mu);

enum class SpaceSel { X0, X1, XGammaMu, XGamma };

// L_{p,mu} trajectory norm: quadrature of t^{(1-mu)p} |u(t)|_X^p over the
// grid. The first subinterval uses the right endpoint so the weight is never
// evaluated against the (possibly singular) t = 0 state.
double weighted_norm(const std::vector<std::vector<double>>& states, const WeightedGrid& grid,
                     SpaceSel space, const NormSuite& norms);

double e0_norm(const std::vector<std::vector<double>>& states, const WeightedGrid& grid,
               const NormSuite& norms);
// adds the backward-difference time derivative in X0 and the X1 channel
double e1_norm(const std::vector<std::vector<double>>& states, const WeightedGrid& grid,
               const NormSuite& norms);

// sigma(T) = (1 + (1-mu) p)^{-1/p} T^{1/p + 1 - mu}; the window factor in the
// forcing estimate. Strictly increasing in T, -> 0 as T -> 0.
double sigma_factor(double T, double p, double mu);

enum class Mu0Kind { SecondOrder, MullinsSekerka };

// Critical weight: 1/2 + (n+2)/(2p) for the second-order problem (p > n+2),
// 1/3 + (n+3)/(3p) for the interface problem (p > (n+3)/2).
double compute_mu0(int n, double p, Mu0Kind kind);

// Quasilinear evolution u' + A(u) u = F(u). apply_A(v, .) must be linear;
// linear_solve(v0; dt, rhs) performs one implicit step with frozen A(v0).
class QuasilinearProblem {
  public:
    virtual ~QuasilinearProblem() = default;
    virtual int dim() const = 0;
    virtual std::vector<double> apply_A(const std::vector<double>& v,
                                        const std::vector<double>& u) const = 0;
    virtual std::vector<double> apply_F(const std::vector<double>& v) const = 0;
    virtual std::vector<double> linear_solve(const std::vector<double>& v0, double dt,
                                             const std::vector<double>& rhs) const = 0;
    virtual const NormSuite& norms() const = 0;
    virtual bool admissible(const std::vector<double>&) const { return true; }
};

// Problem with A + kappa I and F + kappa id. The implicit step solves the
// shifted system exactly through the base solve:
//   (I + dt (A + kappa)) x = rhs  <=>  (I + dt' A) x = rhs / (1 + kappa dt),
// dt' = dt / (1 + kappa dt).
std::shared_ptr<QuasilinearProblem> spectral_shift(std::shared_ptr<const QuasilinearProblem> base,
                                                   double kappa);

struct ContractionDiagnostics {
    double kappa_hat = 0.0;   // observed contraction factor
    double lipschitz_A = 0.0; // finite-difference moduli around the initial state
    double lipschitz_F = 0.0;
    double c_hat = 0.0;       // continuous-dependence constant (0 when not estimated)
    double window = 0.0;      // window length actually used
    double radius = 0.0;      // max distance of iterates from the reference solution
    double epsilon_ball = 0.0;
    int iterations = 0;
    int halvings = 0;
};

struct PicardOptions {
    double tol = 1e-10;
    int max_iterations = 60;
    int max_halvings = 20;
    bool estimate_lipschitz = true;
    // re-solve from a perturbed initial value and fill c_hat (doubles the cost)
    bool estimate_continuous_dependence = false;
    double dependence_probe = 1e-4;
};

struct PicardResult {
    std::vector<std::vector<double>> states;
    WeightedGrid grid; // grid actually used (window may have been halved)
    ContractionDiagnostics diagnostics;
};

// Discrete fixed point of the frozen-coefficient map: iterate solutions of
//   u' + A(u1) u = F(v) + (A(u1) - A(v)) v,  u(0) = u1,
// starting from the homogeneous reference solution. The window is halved (up
// to max_halvings) whenever the iteration fails to contract in the E_{1,mu}
// norm.
PicardResult picard_window(const QuasilinearProblem& problem, const std::vector<double>& u1,
                           const WeightedGrid& grid, const PicardOptions& opts = {});

struct GridPolicy {
    double window = 0.1;
    int steps = 24;
    double grading = 0.0; // 0 = auto; applies to the first window
    double p = 2.0;
    double mu = 1.0;
    double blowup_threshold = 1e6;
    int max_windows = 100000;
};

enum class ContinuationMarker { HorizonReached, FiniteTimeBreakdown };

struct ContinuationResult {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    ContinuationMarker marker = ContinuationMarker::HorizonReached;
    double end_time = 0.0;
    double breakdown_estimate = 0.0;
    std::string cause;
    std::vector<ContractionDiagnostics> windows;
};

// Glued windows: the first uses the weighted graded grid, later windows run
// on uniform unweighted grids. Contraction failure at the window floor or a
// sup-norm pass of the blowup threshold ends the run with a breakdown marker.
ContinuationResult continue_solution(const QuasilinearProblem& problem,
                                     const std::vector<double>& u0, double horizon,
                                     const GridPolicy& policy, const PicardOptions& opts = {});

// One semi-implicit march step: (u+ - u) / dt + A(u) u+ = F(u).
std::vector<double> semi_implicit_step(const QuasilinearProblem& problem,
                                       const std::vector<double>& u, double dt);

} // namespace mslab
