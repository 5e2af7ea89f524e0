#include "mslab/hanzawa.hpp"

#include "mslab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mslab {

HeightFieldStatus height_field_status(const HeightField& h) {
    HeightFieldStatus st;
    for (double v : h.rho) st.max_abs = std::max(st.max_abs, std::fabs(v));
    const std::vector<double> drho = spectral_derivative(h.rho, 1);
    double max_drho = 0.0;
    for (int j = 0; j < h.base.n; ++j)
        max_drho = std::max(max_drho, std::fabs(drho[j]) / h.base.speed[j]); // d rho / d arclength
    st.max_slope = max_drho;
    st.within_margin = st.max_abs <= 0.3 * h.tube.a && st.max_slope <= 1.0;
    st.representable = st.max_abs < 0.95 * h.tube.a;

    const TrigSeries f = trig_analyze(h.rho);
    const int m = f.max_mode();
    double peak = 0.0, tail = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double amp = std::hypot(f.c[k], f.s[k]);
        peak = std::max(peak, amp);
        if (k >= (3 * m) / 4) tail = std::max(tail, amp);
    }
    st.alias_warning = peak > 0.0 && tail > 1e-8 * peak;
    return st;
}

HeightField make_height_field(const ReferenceCurve& base, const TubeData& tube,
                              std::vector<double> rho) {
    if (static_cast<int>(rho.size()) != base.n)
        throw GridMismatch("height values must match the base collocation nodes");
    HeightField h{base, tube, std::move(rho)};
    return h;
}

ReferenceCurve realize_interface(const HeightField& h) {
    const HeightFieldStatus st = height_field_status(h);
    if (!st.representable)
        throw TubeViolation("height field reaches the tube boundary");
    std::vector<Vec2> pts(h.base.n);
    for (int j = 0; j < h.base.n; ++j) pts[j] = h.base.p[j] + h.rho[j] * h.base.normal[j];
    return curve_from_samples(pts, h.base.container);
}

std::vector<double> curvature(const HeightField& h) {
    if (h.base.is_circle()) {
        const double r0 = h.base.circle_radius();
        std::vector<double> r(h.rho);
        for (double& v : r) v += r0;
        const std::vector<double> dr = spectral_derivative(h.rho, 1);
        const std::vector<double> ddr = spectral_derivative(h.rho, 2);
        std::vector<double> k(h.base.n);
        for (int j = 0; j < h.base.n; ++j) {
            const double g = r[j] * r[j] + dr[j] * dr[j];
            k[j] = (r[j] * r[j] + 2.0 * dr[j] * dr[j] - r[j] * ddr[j]) / (g * std::sqrt(g));
        }
        return k;
    }
    return realize_interface(h).kappa;
}

CurvatureSplit split_curvature(const HeightField& h) {
    if (!h.base.is_circle())
        throw UnsupportedBase("curvature split is defined over circular bases");
    const double r0 = h.base.circle_radius();
    const std::vector<double> dr = spectral_derivative(h.rho, 1);
    CurvatureSplit sp;
    sp.second_order_coeff.resize(h.base.n);
    sp.lower_order.resize(h.base.n);
    for (int j = 0; j < h.base.n; ++j) {
        const double r = r0 + h.rho[j];
        const double g = r * r + dr[j] * dr[j];
        const double g32 = g * std::sqrt(g);
        sp.second_order_coeff[j] = r / g32;
        sp.lower_order[j] = (r * r + 2.0 * dr[j] * dr[j]) / g32;
    }
    return sp;
}

HeightField reparameterize(const ReferenceCurve& gamma, const ReferenceCurve& new_base) {
    return reparameterize(gamma, new_base, tube_and_ball(new_base, new_base.container));
}

HeightField reparameterize(const ReferenceCurve& gamma, const ReferenceCurve& new_base,
                           const TubeData& new_tube) {
    std::vector<double> rho(new_base.n, 0.0);
    for (int j = 0; j < new_base.n; ++j) {
        const Vec2 pj = new_base.p[j];
        const Vec2 nu = new_base.normal[j];
        double t = new_base.node_theta(j);
        bool ok = false;
        for (int it = 0; it < 80; ++it) {
            const Vec2 g = gamma.point(t);
            const Vec2 dg = gamma.derivative(t, 1);
            const double f = cross(g - pj, nu);
            const double fp = cross(dg, nu);
            if (fp == 0.0) break;
            const double step = -f / fp;
            t += std::clamp(step, -0.5, 0.5);
            if (std::fabs(step) < 1e-15) { ok = true; break; }
        }
        if (!ok) throw NotConverged("normal line / interface intersection");
        rho[j] = dot(gamma.point(t) - pj, nu);
        if (std::fabs(rho[j]) >= 0.95 * new_tube.a)
            throw TubeViolation("interface leaves the tube of the new base");
    }
    return make_height_field(new_base, new_tube, std::move(rho));
}

Vec2 hanzawa_extension(const HeightField& h, Vec2 x) {
    const Projection pr = signed_distance_project(h.base, x, &h.tube);
    const double s = pr.d / h.tube.a;
    if (std::fabs(s) >= 2.0 / 3.0) return x;
    const double chi = cutoff_chi(s);
    const TrigSeries f = trig_analyze(h.rho);
    const double rho_at = trig_eval(f, pr.theta);
    const Vec2 dp = h.base.derivative(pr.theta, 1);
    const double sp = norm(dp);
    const Vec2 nu{dp.y / sp, -dp.x / sp};
    return x + chi * rho_at * nu;
}

} // namespace mslab
