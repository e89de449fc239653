#ifndef CONCBOUND_FAMILIES_HPP
#define CONCBOUND_FAMILIES_HPP

// Built-in distribution families, so experiment suites and the CLI need no
// external data files.

#include <map>
#include <string>

#include "concbound/measure.hpp"

namespace concbound {

// (1/2) delta_{-a} + (1/2) delta_{+a}, a > 0.
DiscreteDist two_point(double a);

// two_point(1): the fair +-1 coin.
DiscreteDist fair_coin();

// m equally weighted atoms, step h, centered so the mean is exactly zero.
DiscreteDist uniform_lattice(long m, double h);

// (1/2) delta_{-n} + (1/2) delta_{+n}: the growing-support family whose
// sharpened-bound constant grows like sqrt(n).
DiscreteDist counterexample(double n);

// {(-a, p/2), (0, 1-p), (a, p/2)}: zero mean, sigma^2 = p*a^2, lattice step
// a. Choosing p = 1/(4*n*alpha) makes the step equal 2*sigma*sqrt(n*alpha).
DiscreteDist zero_mean_three_point(double p, double a);

// Family lookup by name with strict parameter checking (unknown names or
// parameter keys are ParseErrors).
DiscreteDist make_family(const std::string& name,
                         const std::map<std::string, double>& params);

}  // namespace concbound

#endif  // CONCBOUND_FAMILIES_HPP
