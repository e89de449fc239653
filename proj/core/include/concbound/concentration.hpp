#ifndef CONCBOUND_CONCENTRATION_HPP
#define CONCBOUND_CONCENTRATION_HPP

// The concentration function Q(F, b) = sup_x F{[x, x+b]} (closed-interval
// convention), computed exactly for discrete carriers via a two-pointer
// sweep and statistically for sampled sources.

#include <cstdint>
#include <functional>
#include <random>

#include "concbound/measure.hpp"

namespace concbound {

struct QResult {
    double value = 0.0;            // the supremum, in [0, 1]
    double certified_error = 0.0;  // inherited from the carrier's budget
    double argmax_x = 0.0;         // left endpoint attaining the sup (an atom)
};

// The sup is attained with the window's left edge at an atom position, so a
// linear sweep over sorted atoms is exact. b = 0 returns the largest single
// atom mass. Ties resolve to the smallest left endpoint.
QResult q_exact(const DiscreteDist& f, double b);
QResult q_exact(const LatticeDist& f, double b);

using Sampler = std::function<double(std::mt19937_64&)>;

struct MonteCarloQ {
    double estimate = 0.0;
    double ci_halfwidth = 0.0;  // DKW uniform band, 95% confidence
};

// Draws num_samples variates, forms the empirical measure and returns its
// exact Q together with the DKW half-width sqrt(ln(2/0.05)/(2N)).
// Deterministic given the seed. Requires num_samples >= 100.
MonteCarloQ q_monte_carlo(const Sampler& sampler, double b, long num_samples,
                          std::uint64_t seed);

struct RegularityGap {
    double lhs = 0.0;  // Q(F, g1)
    double rhs = 0.0;  // (1 + intpart(g1/g2)) * Q(F, g2); always >= lhs
};

// The window-cover comparison between two scales. "intpart" is the integer
// part (floor for nonnegative arguments).
RegularityGap q_regularity_gap(const DiscreteDist& f, double g1, double g2);

}  // namespace concbound

#endif  // CONCBOUND_CONCENTRATION_HPP
