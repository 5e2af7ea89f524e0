#pragma once

#include "mslab/geometry.hpp"

#include <vector>

namespace mslab {

// Scalar height field over the nodes of a reference curve; the realized
// interface is p + rho * normal. The 0.3*a margin (plus unit slope bound) is
// the admissibility margin used by the evolution; fields remain representable
// up to just below the tube half-width so that drifted states can still be
// realized and re-parameterized.
struct HeightField {
    ReferenceCurve base;
    TubeData tube;
    std::vector<double> rho;
};

struct HeightFieldStatus {
    double max_abs = 0.0;
    double max_slope = 0.0;
    bool within_margin = false; // |rho|_inf <= 0.3 a and |rho'|_inf <= 1
    bool representable = false; // |rho|_inf < 0.95 a
    bool alias_warning = false; // last-quarter Fourier modes above 1e-8 * max mode
};

HeightFieldStatus height_field_status(const HeightField& h);

HeightField make_height_field(const ReferenceCurve& base, const TubeData& tube,
                              std::vector<double> rho);

// Curve traced by the height field. Throws TubeViolation when the field
// leaves the representable band and SelfIntersection when the traced node
// polygon crosses itself.
ReferenceCurve realize_interface(const HeightField& h);

// Curvature of the realized interface at the collocation nodes. A circular
// base uses the polar-graph formula
//   kappa = (r^2 + 2 r'^2 - r r'') / (r^2 + r'^2)^{3/2},  r = R0 + rho;
// a general base falls back to the parametric curvature of the realized curve.
std::vector<double> curvature(const HeightField& h);

// Quasilinear split kappa(rho) = -a2 * rho'' + Q with a2 > 0; at rho == 0 the
// second-order part reduces to -Laplace-Beltrami on the base circle.
struct CurvatureSplit {
    std::vector<double> second_order_coeff; // a2
    std::vector<double> lower_order;        // Q
};

CurvatureSplit split_curvature(const HeightField& h); // circle base only

// Heights of gamma over new_base, found by intersecting each normal line of
// new_base with gamma (Newton, initialized at the matching node parameter).
HeightField reparameterize(const ReferenceCurve& gamma, const ReferenceCurve& new_base);
HeightField reparameterize(const ReferenceCurve& gamma, const ReferenceCurve& new_base,
                           const TubeData& new_tube);

// Hanzawa bulk extension: x + chi(d/a) rho(Pi(x)) nu(Pi(x)); identity outside
// the 2/3-tube.
Vec2 hanzawa_extension(const HeightField& h, Vec2 x);

} // namespace mslab
