#ifndef CONCBOUND_QUADRATURE_HPP
#define CONCBOUND_QUADRATURE_HPP

#include <functional>

#include "concbound/measure.hpp"

namespace concbound {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance
// abs_tol. The initial subdivision uses panels no wider than max_step, so
// sharply concentrated or oscillatory integrands are seeded finely enough
// for the error estimate to be trustworthy.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double max_step);

// Integral of |F-hat(t)|^exponent over [-t_max, t_max]. scale_b sets the
// oscillation-aware panel cap min(pi*scale_b, pi/(4*max|x|*sqrt(exponent))).
double charfn_power_integral(const DiscreteDist& f, long exponent, double t_max,
                             double scale_b, double abs_tol = 1e-10);

}  // namespace concbound

#endif  // CONCBOUND_QUADRATURE_HPP
