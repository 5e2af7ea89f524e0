#pragma once

#include "mslab/elliptic.hpp"
#include "mslab/hanzawa.hpp"
#include "mslab/stepper.hpp"

#include <functional>
#include <memory>

namespace mslab {

// coefficient / source callback: arguments are (u, u_x)
using ScalarCoefficient = std::function<double(double, double)>;

// Second-order quasilinear Dirichlet problem on (0,1):
//   u_t - a(u, u_x) u_xx = f(u, u_x),  u(0) = u(1) = 0,
// discretized on `interior_nodes` equispaced interior points. The implicit
// step solves the frozen-coefficient tridiagonal system. a must stay positive
// along the trajectory (monitored).
std::shared_ptr<QuasilinearProblem> make_second_order(ScalarCoefficient a, ScalarCoefficient f,
                                                      int interior_nodes, double p = 2.0,
                                                      double mu = 1.0);

// Interface state: heights over a circular reference curve inside the
// container.
struct MsState {
    ReferenceCurve sigma; // circle
    TubeData tube;
    Container container;
    std::vector<double> rho;

    HeightField field() const { return HeightField{sigma, tube, rho}; }
};

MsState make_ms_state(const Container& container, Vec2 center, double radius, int nodes,
                      std::vector<double> rho);

struct MsVectorFieldEval {
    std::vector<double> rho_dot;         // height velocity
    std::vector<double> normal_velocity; // V = jump of the normal derivative
    std::vector<double> curvature_data;  // Dirichlet data g = K(rho)
    double dissipation = 0.0;            // integral of |grad u|^2
    ReferenceCurve realized;
};

// Height velocity of the interface flow: solve the two-phase problem with
// g = K(rho) on the realized curve, take V = jump, and convert the normal
// velocity to a height velocity through 1/(nu_sigma . nu_gamma).
MsVectorFieldEval ms_vector_field(const MsState& state);

// sup norm of the height velocity
double ms_equilibrium_residual(const MsState& state);

// The interface flow as a quasilinear problem in the height variable over the
// fixed base circle:
//   A(v) u = metric(v) * dtn_jump_{Gamma_v}[ a2(v) * u'' ]   (frozen stiff part)
//   F(v)   = metric(v) * dtn_jump_{Gamma_v}[ Q(v) ]
// so that -A(v) v + F(v) reassembles the full vector field identically. The
// implicit step factors the dense frozen operator. field_eval shares the
// cached factorizations with the stepping path.
class MsQuasilinearProblem : public QuasilinearProblem {
  public:
    virtual MsVectorFieldEval field_eval(const std::vector<double>& rho) const = 0;
    virtual const Container& container() const = 0;
    virtual const ReferenceCurve& sigma() const = 0;
    virtual const TubeData& tube() const = 0;
};

std::shared_ptr<MsQuasilinearProblem> ms_problem(const Container& container,
                                                 const ReferenceCurve& sigma, double p, double mu);

} // namespace mslab
