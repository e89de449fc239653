#include "concbound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace concbound {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double eps,
                     int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double max_step) {
    if (!(b > a)) {
        return 0.0;
    }
    if (!(max_step > 0.0)) {
        max_step = b - a;
    }
    const long panels = std::max<long>(1, static_cast<long>(std::ceil((b - a) / max_step)));
    const double h = (b - a) / static_cast<double>(panels);
    const double panel_tol = abs_tol / static_cast<double>(panels);
    double total = 0.0;
    for (long i = 0; i < panels; ++i) {
        const double x0 = a + static_cast<double>(i) * h;
        const double x1 = (i + 1 == panels) ? b : x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0);
        const double fm = f(xm);
        const double f1 = f(x1);
        const double whole = simpson(f0, fm, f1, x1 - x0);
        total += adaptive_step(f, x0, x1, f0, fm, f1, whole, panel_tol, 40);
    }
    return total;
}

double charfn_power_integral(const DiscreteDist& f, long exponent, double t_max,
                             double scale_b, double abs_tol) {
    if (exponent < 0) {
        throw BadRange("charfn_power_integral requires a nonnegative exponent");
    }
    const double n = static_cast<double>(exponent);
    auto integrand = [&](double t) {
        const double modulus = charfn_modulus(f, t);
        return std::pow(modulus, n);
    };
    const double spread = max_abs_position(f);
    double cap = std::numbers::pi * scale_b;
    if (spread > 0.0 && exponent > 0) {
        cap = std::min(cap, std::numbers::pi / (4.0 * spread * std::sqrt(n)));
    }
    // |F-hat(-t)| = |F-hat(t)|; integrate the right half and double.
    return 2.0 * adaptive_simpson(integrand, 0.0, t_max, 0.5 * abs_tol, cap);
}

}  // namespace concbound
