#include "mslab/geometry.hpp"

#include "mslab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mslab {

namespace {

const double kPi = std::acos(-1.0);

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

} // namespace

double ReferenceCurve::node_theta(int j) const { return 2.0 * kPi * j / n; }

Vec2 ReferenceCurve::point(double theta) const {
    return {trig_eval(fx, theta), trig_eval(fy, theta)};
}

Vec2 ReferenceCurve::derivative(double theta, int order) const {
    return {trig_eval_derivative(fx, theta, order), trig_eval_derivative(fy, theta, order)};
}

double ReferenceCurve::perimeter() const {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += speed[j];
    return acc * 2.0 * kPi / n;
}

double ReferenceCurve::enclosed_area() const {
    // 1/2 * integral of (x y' - y x') dtheta, spectrally exact for the series
    const std::vector<double> xs = trig_synthesize(fx, n);
    const std::vector<double> ys = trig_synthesize(fy, n);
    const std::vector<double> dxs = spectral_derivative(xs, 1);
    const std::vector<double> dys = spectral_derivative(ys, 1);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += xs[j] * dys[j] - ys[j] * dxs[j];
    return 0.5 * acc * 2.0 * kPi / n;
}

bool ReferenceCurve::is_circle(double tol) const {
    const double r = std::hypot(fx.c[1], fx.s[1]);
    const double scale = std::max(1e-300, r);
    if (std::fabs(fx.c[1] - fy.s[1]) > tol * scale) return false;
    if (std::fabs(fx.s[1]) > tol * scale || std::fabs(fy.c[1]) > tol * scale) return false;
    const int m = fx.max_mode();
    for (int k = 2; k <= m; ++k) {
        if (std::fabs(fx.c[k]) > tol * scale || std::fabs(fx.s[k]) > tol * scale) return false;
        if (std::fabs(fy.c[k]) > tol * scale || std::fabs(fy.s[k]) > tol * scale) return false;
    }
    return true;
}

double ReferenceCurve::circle_radius() const {
    if (!is_circle()) throw UnsupportedBase("curve is not a circle");
    return fx.c[1];
}

Vec2 ReferenceCurve::circle_center() const {
    if (!is_circle()) throw UnsupportedBase("curve is not a circle");
    return {fx.c[0], fy.c[0]};
}

CurveSpec CurveSpec::circle(Vec2 c, double R, int n) {
    CurveSpec s;
    s.kind = Kind::Circle;
    s.center = c;
    s.radius = R;
    s.nodes = n;
    return s;
}

CurveSpec CurveSpec::ellipse(Vec2 c, double a, double b, int n) {
    CurveSpec s;
    s.kind = Kind::Ellipse;
    s.center = c;
    s.semi_a = a;
    s.semi_b = b;
    s.nodes = n;
    return s;
}

CurveSpec CurveSpec::polar(Vec2 c, TrigSeries r, int n) {
    CurveSpec s;
    s.kind = Kind::Polar;
    s.center = c;
    s.radial = std::move(r);
    s.nodes = n;
    return s;
}

CurveSpec CurveSpec::cartesian(TrigSeries fx, TrigSeries fy, int n) {
    CurveSpec s;
    s.kind = Kind::Cartesian;
    s.fx = std::move(fx);
    s.fy = std::move(fy);
    s.nodes = n;
    return s;
}

ReferenceCurve curve_from_samples(const std::vector<Vec2>& samples, const Container& container,
                                  bool validate) {
    if (!(container.radius > 0.0)) throw ParameterOutOfRange("container radius must be positive");
    const int n = static_cast<int>(samples.size());
    if (!is_pow2(n) || n < 8) throw ParameterOutOfRange("curve needs a power-of-two sample count >= 8");
    ReferenceCurve c;
    c.n = n;
    c.container = container;
    std::vector<double> xs(n), ys(n);
    for (int j = 0; j < n; ++j) { xs[j] = samples[j].x; ys[j] = samples[j].y; }
    c.fx = trig_analyze(xs);
    c.fy = trig_analyze(ys);
    c.p = samples;

    const std::vector<double> dx = spectral_derivative(xs, 1);
    const std::vector<double> dy = spectral_derivative(ys, 1);
    const std::vector<double> ddx = spectral_derivative(xs, 2);
    const std::vector<double> ddy = spectral_derivative(ys, 2);
    c.speed.resize(n);
    c.tangent.resize(n);
    c.normal.resize(n);
    c.kappa.resize(n);
    for (int j = 0; j < n; ++j) {
        const double sp = std::hypot(dx[j], dy[j]);
        if (sp < 1e-12) throw DegenerateCurve("vanishing parameterization speed");
        c.speed[j] = sp;
        c.tangent[j] = {dx[j] / sp, dy[j] / sp};
        c.normal[j] = {c.tangent[j].y, -c.tangent[j].x};
        c.kappa[j] = (dx[j] * ddy[j] - dy[j] * ddx[j]) / (sp * sp * sp);
    }

    if (validate) {
        if (c.enclosed_area() <= 0.0)
            throw SelfIntersection("curve is not positively oriented / encloses no area");
        // strictly inside the container, checked on a refined sampling
        const int m = 2 * n;
        for (int j = 0; j < m; ++j) {
            const Vec2 q = c.point(2.0 * kPi * j / m);
            if (dist(q, container.center) >= container.radius)
                throw OutsideContainer("curve reaches the container wall");
        }
        // simplicity: no two non-adjacent node segments may cross
        for (int i = 0; i < n; ++i) {
            const Vec2 a = c.p[i], b = c.p[(i + 1) % n];
            for (int j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue;
                if (segments_intersect(a, b, c.p[j], c.p[(j + 1) % n]))
                    throw SelfIntersection("node polygon crosses itself");
            }
        }
    }
    return c;
}

ReferenceCurve build_reference_curve(const CurveSpec& spec, const Container& container) {
    const int n = spec.nodes;
    if (!is_pow2(n) || n < 8) throw ParameterOutOfRange("node count must be a power of two >= 8");
    std::vector<Vec2> pts(n);
    switch (spec.kind) {
        case CurveSpec::Kind::Circle:
            if (spec.radius <= 0.0) throw ParameterOutOfRange("circle radius must be positive");
            for (int j = 0; j < n; ++j) {
                const double t = 2.0 * kPi * j / n;
                pts[j] = spec.center + Vec2{spec.radius * std::cos(t), spec.radius * std::sin(t)};
            }
            break;
        case CurveSpec::Kind::Ellipse:
            if (spec.semi_a <= 0.0 || spec.semi_b <= 0.0)
                throw ParameterOutOfRange("ellipse semi-axes must be positive");
            for (int j = 0; j < n; ++j) {
                const double t = 2.0 * kPi * j / n;
                pts[j] = spec.center + Vec2{spec.semi_a * std::cos(t), spec.semi_b * std::sin(t)};
            }
            break;
        case CurveSpec::Kind::Polar:
            for (int j = 0; j < n; ++j) {
                const double t = 2.0 * kPi * j / n;
                const double r = trig_eval(spec.radial, t);
                if (r <= 0.0) throw DegenerateCurve("polar radius must stay positive");
                pts[j] = spec.center + Vec2{r * std::cos(t), r * std::sin(t)};
            }
            break;
        case CurveSpec::Kind::Cartesian:
            for (int j = 0; j < n; ++j) {
                const double t = 2.0 * kPi * j / n;
                pts[j] = {trig_eval(spec.fx, t), trig_eval(spec.fy, t)};
            }
            // normalize orientation for externally supplied coefficients
            {
                double area = 0.0;
                for (int j = 0; j < n; ++j) area += cross(pts[j], pts[(j + 1) % n]);
                if (area < 0.0) {
                    std::vector<Vec2> rev(n);
                    rev[0] = pts[0];
                    for (int j = 1; j < n; ++j) rev[j] = pts[n - j];
                    pts.swap(rev);
                }
            }
            break;
    }
    return curve_from_samples(pts, container);
}

Projection signed_distance_project(const ReferenceCurve& curve, Vec2 x, const TubeData* tube) {
    // dense initialization on the cached nodes
    int jbest = 0;
    double dbest = std::numeric_limits<double>::max();
    for (int j = 0; j < curve.n; ++j) {
        const double d2 = norm2(curve.p[j] - x);
        if (d2 < dbest) { dbest = d2; jbest = j; }
    }
    double theta = curve.node_theta(jbest);
    const double h = 2.0 * kPi / curve.n;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        const Vec2 pt = curve.point(theta);
        const Vec2 dp = curve.derivative(theta, 1);
        const Vec2 ddp = curve.derivative(theta, 2);
        const double f = dot(pt - x, dp);
        const double fp = norm2(dp) + dot(pt - x, ddp);
        if (fp == 0.0) break;
        double step = -f / fp;
        step = std::clamp(step, -2.0 * h, 2.0 * h);
        theta += step;
        if (std::fabs(step) < 1e-15) { converged = true; break; }
    }
    if (!converged) {
        // fall back to a golden-section refinement around the best node
        double lo = curve.node_theta(jbest) - h, hi = curve.node_theta(jbest) + h;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + 0.382 * (hi - lo);
            const double m2 = lo + 0.618 * (hi - lo);
            if (norm2(curve.point(m1) - x) < norm2(curve.point(m2) - x)) hi = m2;
            else lo = m1;
        }
        theta = 0.5 * (lo + hi);
        const Vec2 pt = curve.point(theta);
        const Vec2 dp = curve.derivative(theta, 1);
        if (std::fabs(dot(pt - x, dp)) > 1e-6 * norm(dp) * (1.0 + norm(pt - x)))
            throw NotConverged("nearest-point projection");
    }
    Projection pr;
    pr.theta = theta;
    pr.foot = curve.point(theta);
    const Vec2 dp = curve.derivative(theta, 1);
    const double sp = norm(dp);
    const Vec2 nu{dp.y / sp, -dp.x / sp};
    const double dd = norm(x - pr.foot);
    pr.d = (dot(x - pr.foot, nu) >= 0.0) ? dd : -dd;
    pr.in_tube = tube != nullptr && std::fabs(pr.d) < tube->a;
    return pr;
}

TubeData tube_and_ball(const ReferenceCurve& curve, const Container& container) {
    TubeData t;
    for (double k : curve.kappa) t.kappa_max = std::max(t.kappa_max, std::fabs(k));
    if (t.kappa_max > 1e8 || !std::isfinite(t.kappa_max))
        throw DegenerateCurve("curvature numerically unbounded");

    // dense sampling of the curve for the rolling-ball search
    const int m = 4 * curve.n;
    std::vector<Vec2> q(m);
    for (int j = 0; j < m; ++j) q[j] = curve.point(2.0 * kPi * j / m);

    double clearance = std::numeric_limits<double>::max();
    for (const Vec2& y : q) clearance = std::min(clearance, container.radius - dist(y, container.center));
    if (clearance <= 0.0) throw OutsideContainer("curve touches the container wall");

    double r_ball = clearance;
    for (int i = 0; i < curve.n; ++i) {
        const Vec2 pi = curve.p[i];
        const Vec2 nu = curve.normal[i];
        // local curvature limits
        double r_int = (curve.kappa[i] > 0.0) ? 1.0 / curve.kappa[i] : std::numeric_limits<double>::max();
        double r_ext = (curve.kappa[i] < 0.0) ? -1.0 / curve.kappa[i] : std::numeric_limits<double>::max();
        for (const Vec2& y : q) {
            const Vec2 w = pi - y;
            const double w2 = norm2(w);
            if (w2 < 1e-24) continue;
            const double proj = dot(nu, w);
            if (proj > 1e-12) r_int = std::min(r_int, w2 / (2.0 * proj));
            else if (proj < -1e-12) r_ext = std::min(r_ext, w2 / (-2.0 * proj));
        }
        r_ball = std::min({r_ball, r_int, r_ext});
    }
    if (r_ball <= 0.0) throw DegenerateCurve("rolling-ball radius collapsed");
    t.r_ball = r_ball;
    t.a = 0.9 * std::min(1.0 / t.kappa_max, t.r_ball);
    t.a = std::min(t.a, 1.0);
    return t;
}

TubeData circle_tube(Vec2 center, double radius, const Container& container) {
    if (!(radius > 0.0)) throw ParameterOutOfRange("circle radius must be positive");
    TubeData t;
    t.kappa_max = 1.0 / radius;
    const double clearance = container.radius - (dist(center, container.center) + radius);
    if (clearance <= 0.0) throw OutsideContainer("circle touches the container wall");
    t.r_ball = std::min(radius, clearance);
    t.a = std::min(0.9 * std::min(radius, t.r_ball), 1.0);
    return t;
}

double cutoff_chi(double s) {
    const double u = std::fabs(s);
    constexpr double delta = 0.012;
    constexpr double u0 = 1.0 / 3.0 + delta;
    constexpr double u1 = 2.0 / 3.0 - delta;
    const double sigma = 1.0 / (u1 - u0);
    if (u <= u0 - delta) return 1.0;
    if (u >= u1 + delta) return 0.0;
    auto ramp_corner = [&](double x) {
        // integral of max(0, x - v) against the cosine mollifier on [-delta, delta]
        const double m0 = (x + delta) / (2.0 * delta) + std::sin(kPi * x / delta) / (2.0 * kPi);
        const double m1 = x * x / (4.0 * delta) + x * std::sin(kPi * x / delta) / (2.0 * kPi) +
                          delta * std::cos(kPi * x / delta) / (2.0 * kPi * kPi) - delta / 4.0 +
                          delta / (2.0 * kPi * kPi);
        return x * m0 - m1;
    };
    if (u < u0 + delta) return 1.0 - sigma * ramp_corner(u - u0);
    if (u <= u1 - delta) return sigma * (u1 - u);
    return sigma * ramp_corner(u1 - u);
}

double level_function_eval(const LevelFunction& lf, Vec2 x) {
    const Projection pr = signed_distance_project(lf.curve, x, &lf.tube);
    const double d = pr.d;
    if (d == 0.0) return 0.0;
    const double chi = cutoff_chi(d / lf.tube.a);
    const double sgn = d > 0.0 ? 1.0 : -1.0;
    return d * chi + (1.0 - chi) * sgn;
}

namespace {

double hausdorff(const std::vector<std::vector<double>>& u, const std::vector<std::vector<double>>& v,
                 double (*point_dist)(const std::vector<double>&, const std::vector<double>&)) {
    double h = 0.0;
    for (const auto& a : u) {
        double dmin = std::numeric_limits<double>::max();
        for (const auto& b : v) dmin = std::min(dmin, point_dist(a, b));
        h = std::max(h, dmin);
    }
    for (const auto& b : v) {
        double dmin = std::numeric_limits<double>::max();
        for (const auto& a : u) dmin = std::min(dmin, point_dist(a, b));
        h = std::max(h, dmin);
    }
    return h;
}

double dist_pos(const std::vector<double>& a, const std::vector<double>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// componentwise max over the (position, normal, shape-operator) blocks
double dist_bundle(const std::vector<double>& a, const std::vector<double>& b) {
    const double dp = std::hypot(a[0] - b[0], a[1] - b[1]);
    const double dn = std::hypot(a[2] - b[2], a[3] - b[3]);
    const double dk = std::fabs(a[4] - b[4]);
    return std::max({dp, dn, dk});
}

} // namespace

double bundle_distance(const ReferenceCurve& c1, const ReferenceCurve& c2, int order) {
    if (c1.n < 64 || c2.n < 64)
        throw ParameterOutOfRange("bundle_distance requires curves sampled at >= 64 nodes");
    if (order != 0 && order != 2) throw ParameterOutOfRange("bundle_distance order must be 0 or 2");
    auto lift = [order](const ReferenceCurve& c) {
        std::vector<std::vector<double>> pts(c.n);
        for (int j = 0; j < c.n; ++j) {
            if (order == 0) pts[j] = {c.p[j].x, c.p[j].y};
            else pts[j] = {c.p[j].x, c.p[j].y, c.normal[j].x, c.normal[j].y, c.kappa[j]};
        }
        return pts;
    };
    const auto u = lift(c1), v = lift(c2);
    return order == 0 ? hausdorff(u, v, dist_pos) : hausdorff(u, v, dist_bundle);
}

} // namespace mslab
