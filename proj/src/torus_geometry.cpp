#include "torustat/torus_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace torustat {

namespace {

constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

// Adaptive Simpson with the classic 1/15 error estimate.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    if (depth <= 0) {
        throw std::runtime_error("quadrature_area: failed to converge to tolerance");
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

double CornerAreas::min() const { return std::min(std::min(a1, a2), std::min(a3, a4)); }

CornerAreas corner_areas(const TorusPoint& p1, const TorusPoint& p2, const TorusShape& shape) {
    // The closed forms assume phi1 <= phi2 and theta1 <= theta2; sorting each
    // axis independently keeps the result label-invariant.
    const double phi1 = std::min(p1.phi, p2.phi);
    const double phi2 = std::max(p1.phi, p2.phi);
    const double th1 = std::min(p1.theta, p2.theta);
    const double th2 = std::max(p1.theta, p2.theta);
    const double c = shape.ratio;

    const double dphi = phi2 - phi1;
    const double v = (th2 - th1) + c * (std::sin(th2) - std::sin(th1));
    const double w = (two_pi - (th2 - th1)) + c * (std::sin(th1) - std::sin(th2));

    CornerAreas a;
    a.a1 = dphi * v;
    a.a2 = (two_pi - dphi) * v;
    a.a3 = dphi * w;
    a.a4 = (two_pi - dphi) * w;
    return a;
}

double proportionate_area(const TorusPoint& p1, const TorusPoint& p2, const TorusShape& shape) {
    return corner_areas(p1, p2, shape).min() / four_pi_sq;
}

double square_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("square_angle: non-finite angle");
    }
    const double t = mod2pi(theta);
    // The minimal corner for (0,0)-(t,t) at ratio 1 is t*(t+sin t) for t <= pi
    // and its mirror image for t > pi.
    const double u = std::min(t, two_pi - t);
    return u * (u + std::sin(u)) / four_pi_sq;
}

double quadrature_area(double phi_lo, double phi_hi, double theta_lo, double theta_hi,
                       const TorusShape& shape, double abs_tol) {
    if (!(phi_lo <= phi_hi) || !(theta_lo <= theta_hi) ||
        phi_lo < 0.0 || phi_hi > two_pi || theta_lo < 0.0 || theta_hi > two_pi) {
        throw std::invalid_argument("quadrature_area: bounds must satisfy 0 <= lo <= hi <= 2*pi");
    }
    const double c = shape.ratio;
    const double outer_tol = 0.5 * abs_tol;
    const double inner_tol = 0.5 * abs_tol / (two_pi + 1.0);
    auto outer = [&](double phi) {
        (void)phi; // the area element does not depend on phi
        return integrate([&](double th) { return 1.0 + c * std::cos(th); },
                         theta_lo, theta_hi, inner_tol);
    };
    return integrate(outer, phi_lo, phi_hi, outer_tol);
}

} // namespace torustat
