#pragma once

#include "mslab/linalg.hpp"
#include "mslab/models.hpp"

#include <array>
#include <string>
#include <vector>

namespace mslab {

enum class StopReason {
    HorizonReached,
    TubeViolationStop,
    BallConditionBreach,
    NormBlowup,
    EtaMarginBreach,
    NoContractionStop,
};

enum class EvolveMode { Picard, SemiImplicit };

struct MonitorThresholds {
    double norm_max = 1e3;       // M: blowup guard on the X_gamma proxy
    double ball_min = 0.05;      // r: uniform ball condition
    double eta_factor = 0.05;    // eta >= eta_factor * a
};

struct EvolveConfig {
    double horizon = 0.2;
    EvolveMode mode = EvolveMode::SemiImplicit;
    int steps = 1000;          // semi-implicit steps over the horizon
    double window = 0.02;      // picard window length
    int window_steps = 16;     // picard nodes per window
    double grading = 0.0;      // picard first window; 0 = auto
    double p = 6.0;
    double mu = 0.75;
    MonitorThresholds monitors;
    bool allow_reparameterization = true;
    bool canonical_channels = true; // eta / X_gamma measured over the fitted circle
};

// Per-state record of an interface trajectory: heights plus the base circle
// they live over, so states can be re-realized after the fact.
struct MsSnapshot {
    double time = 0.0;
    Vec2 center{};
    double radius = 0.0;
    std::vector<double> rho;
};

struct Trajectory {
    bool is_interface = false;
    Container container;
    std::vector<double> times;
    std::vector<MsSnapshot> snapshots;             // interface runs
    std::vector<std::vector<double>> states;       // 1d runs
    // monitor channels, aligned with times
    std::vector<double> perimeter;
    std::vector<double> area;
    std::vector<double> residual;
    std::vector<double> ball_radius;
    std::vector<double> eta;
    std::vector<double> xgamma_norm;
    std::vector<double> dissipation;
    std::vector<double> x0_norm;                   // 1d channel
    std::vector<int> reparam_events;               // indices into times
    std::vector<ContractionDiagnostics> windows;   // picard-mode runs
    StopReason stop = StopReason::HorizonReached;
    std::string stop_detail;
};

MsState snapshot_state(const Container& container, const MsSnapshot& snap);

// Drive the interface flow with monitors. Semi-implicit marching for long
// runs; the picard mode glues contraction windows (the acceptance-facing
// path). Reparameterization onto a freshly fitted circle fires whenever the
// height field leaves its margin.
Trajectory evolve_ms(const MsState& initial, const EvolveConfig& config);

// 1d backend: delegates to continue_solution (picard) or marches
// semi-implicitly; channels carry norms instead of geometry.
Trajectory evolve_quasilinear(const QuasilinearProblem& problem, const std::vector<double>& u0,
                              const EvolveConfig& config);

// Re-center the state onto a least-squares fitted circle when the height
// margin is exceeded; geometry preserved to ~1e-8.
MsState maybe_reparameterize(const MsState& state);

struct LjapunovTrace {
    std::vector<double> times;
    std::vector<double> perimeter;
    std::vector<double> dissipation;
    bool nonincreasing = false;  // up to 1e-8 per step
    double max_increase = 0.0;
    double max_defect = 0.0;     // max | d(perimeter)/dt + dissipation |
};

LjapunovTrace ljapunov_trace(const Trajectory& traj);

struct EquilibriumFit {
    Vec2 center{};
    double radius = 0.0;
    double residual = 0.0; // sup nodewise distance from the fitted circle
};

EquilibriumFit fit_equilibrium(const ReferenceCurve& curve);

struct RateFit {
    double omega = 0.0;
    double quality = 0.0; // coefficient of determination of the log fit
    int samples = 0;
};

// Least-squares slope of log d(t) on the last decade of decay, keeping clear
// of the plateau at the series tail. Throws NonPositiveSeries when the fit
// window contains non-positive values.
RateFit exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                         double lo_factor = 30.0, double span = 10.0);

struct LinearizationReport {
    int modes = 0;                   // retained Fourier modes (matrix dim = 2*modes + 1)
    DenseMatrix matrix;              // basis 1, cos t, sin t, cos 2t, sin 2t, ...
    std::vector<double> eigenvalues; // of the symmetric part, ascending
    double asymmetry = 0.0;          // max |A - A^T| entry over the spectral radius
    double spectral_radius = 0.0;
    std::array<double, 3> kernel_residuals{}; // directions 1, cos t, sin t
    int kernel_dim = 0;
    bool normally_stable = false;
};

// Finite-difference linearization of minus the vector field in Fourier-mode
// directions around a near-equilibrium state (residual < 1e-6).
LinearizationReport linearize_at(const MsState& state, double fd_step = 1e-5, int modes = 16);

// diagonal entry for mode k (average of the cos/sin blocks)
double mode_eigenvalue(const LinearizationReport& rep, int k);

enum class OmegaVerdict { Converged, InProgress, NonConvergent };

struct OmegaLimitReport {
    EquilibriumFit limit;
    RateFit rate;
    OmegaVerdict verdict = OmegaVerdict::NonConvergent;
    std::string cause;
    double final_residual = 0.0;
};

OmegaLimitReport omega_limit_report(const Trajectory& traj);

} // namespace mslab
