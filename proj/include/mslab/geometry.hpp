#pragma once

#include "mslab/fourier.hpp"
#include "mslab/vec2.hpp"

#include <vector>

namespace mslab {

// Bounded container domain. Fixed to a disk: the outer Neumann wall then has
// an exact image/series treatment in the elliptic module.
struct Container {
    double radius = 1.0;
    Vec2 center{0.0, 0.0};
};

// Smooth closed curve given by truncated Fourier series for both coordinates,
// sampled at n equispaced parameter nodes (n a power of two). Node caches
// (positions, unit tangent/outward normal, speed, curvature) are filled at
// construction. Curvature convention: +1/R for a counterclockwise circle with
// outward normal.
struct ReferenceCurve {
    TrigSeries fx, fy;
    int n = 0;
    Container container;

    std::vector<Vec2> p;
    std::vector<Vec2> tangent;
    std::vector<Vec2> normal;
    std::vector<double> speed;
    std::vector<double> kappa;

    double node_theta(int j) const;
    Vec2 point(double theta) const;
    Vec2 derivative(double theta, int order) const;

    double perimeter() const;
    double enclosed_area() const;

    bool is_circle(double tol = 1e-10) const;
    double circle_radius() const; // throws UnsupportedBase unless is_circle()
    Vec2 circle_center() const;
};

struct TubeData {
    double a = 0.0;        // tube half-width
    double r_ball = 0.0;   // two-sided rolling-ball radius, capped by wall clearance
    double kappa_max = 0.0;
};

struct CurveSpec {
    enum class Kind { Circle, Ellipse, Polar, Cartesian };
    Kind kind = Kind::Circle;
    Vec2 center{0.0, 0.0};
    double radius = 0.0;
    double semi_a = 0.0, semi_b = 0.0;
    TrigSeries radial;   // Polar: r(theta) about center
    TrigSeries fx, fy;   // Cartesian coefficients
    int nodes = 256;

    static CurveSpec circle(Vec2 c, double R, int n);
    static CurveSpec ellipse(Vec2 c, double a, double b, int n);
    static CurveSpec polar(Vec2 c, TrigSeries r, int n);
    static CurveSpec cartesian(TrigSeries fx, TrigSeries fy, int n);
};

// Resamples the shape to n collocation nodes and validates: simple, closed,
// strictly inside the container. Throws SelfIntersection / OutsideContainer.
ReferenceCurve build_reference_curve(const CurveSpec& spec, const Container& container);

// Curve through the given equispaced-parameter samples (size a power of two).
ReferenceCurve curve_from_samples(const std::vector<Vec2>& samples, const Container& container,
                                  bool validate = true);

struct Projection {
    double d = 0.0;    // signed distance, d < 0 inside the curve
    Vec2 foot{};       // nearest point on the curve
    double theta = 0.0;
    bool in_tube = false; // |d| < tube half-width (false when no tube given)
};

// Nearest-point projection via Newton on the parameter with dense-grid
// initialization. Inside the tube the round trip foot + d*normal == x holds to
// near machine precision; outside it is best effort and in_tube stays false.
Projection signed_distance_project(const ReferenceCurve& curve, Vec2 x,
                                   const TubeData* tube = nullptr);

// Tube half-width and rolling-ball radius. a = 0.9 * min(1/kappa_max, r_ball),
// additionally clamped to 1 (the level-function ramp assumes a <= 1).
TubeData tube_and_ball(const ReferenceCurve& curve, const Container& container);

// Closed-form tube data for a circle: r_ball = min(R, wall clearance).
TubeData circle_tube(Vec2 center, double radius, const Container& container);

struct LevelFunction {
    ReferenceCurve curve;
    TubeData tube;
};

// chi: C^2 cutoff, == 1 for |s| <= 1/3, == 0 for |s| >= 2/3, built as a
// mollified linear ramp so that max |chi'| ~ 3.23; heights up to 0.3*a then
// keep the normal-direction maps injective.
double cutoff_chi(double s);

// g(d) = d*chi(d/a) + (1 - chi(d/a))*sgn(d); equals sgn(d) outside the tube.
double level_function_eval(const LevelFunction& lf, Vec2 x);

// order 0: Hausdorff distance between the sampled node sets.
// order 2: nodes lifted to (p, normal, curvature); pointwise distance is the
// componentwise max over the three blocks, then Hausdorff.
double bundle_distance(const ReferenceCurve& c1, const ReferenceCurve& c2, int order);

} // namespace mslab
