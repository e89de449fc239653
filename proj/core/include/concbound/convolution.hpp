#ifndef CONCBOUND_CONVOLUTION_HPP
#define CONCBOUND_CONVOLUTION_HPP

// Exact and FFT-accelerated convolution, convolution powers by binary
// exponentiation, and the binomial mixture expansion of H*F^n into
// H*U^(n-k)*V^k components.

#include <cstddef>
#include <vector>

#include "concbound/measure.hpp"

namespace concbound {

// Dense pairwise convolutions refuse to enumerate more than this many
// atom pairs; callers must switch to the lattice path beyond it.
inline constexpr std::size_t kDenseAtomCap = std::size_t{1} << 24;
// Single FFT buffers are capped at this length.
inline constexpr std::size_t kFftCap = std::size_t{1} << 26;

// Certified total-variation loss, split by source.
struct ErrorBudget {
    double pruned_mass = 0.0;   // atoms dropped below prune_eps
    double fft_residual = 0.0;  // negative FFT artifacts clamped to zero
    double total() const { return pruned_mass + fft_residual; }
};

// Binomial(n, p) probabilities, built by the stable two-sided recurrence
// from the largest term so small tails never divide by near-zero values.
struct BinomialWeights {
    long n = 0;
    double p = 0.0;
    std::vector<double> pmf;  // size n+1

    // P(mu < r): sum of pmf[0..r-1].
    double tail_below(long r) const;
};

BinomialWeights binomial_pmf(long n, double p);

// All pairwise sums with masses merged (positions within kMergeTolerance).
// Throws SupportExplosion past kDenseAtomCap pairs.
DiscreteDist convolve(const DiscreteDist& f, const DiscreteDist& g);

// Drops atoms with mass < eps, charging the dropped total to the budget.
DiscreteDist prune(const DiscreteDist& f, double eps);
LatticeDist prune(const LatticeDist& f, double eps);

// F^n by square-and-multiply; F^0 is the unit point mass at 0. Pruning is
// applied after every multiplication. `acc`, when given, collects the
// budget breakdown added by this call.
DiscreteDist conv_power(const DiscreteDist& f, long n, double prune_eps = 0.0,
                        ErrorBudget* acc = nullptr);

// Lattice version; the product of two lattice measures with equal step uses
// a real-input FFT of size next power of two >= output length. Negative FFT
// artifacts with magnitude <= 1e-14 * output length are clamped to zero and
// charged to fft_residual.
LatticeDist lattice_convolve(const LatticeDist& a, const LatticeDist& b,
                             ErrorBudget* acc = nullptr);

LatticeDist conv_power(const LatticeDist& f, long n, double prune_eps = 0.0,
                       ErrorBudget* acc = nullptr);

// Prefix table of convolution powers base^0..base^max_power, built with
// one convolution per entry and shared by the Theorem-style evaluators.
class PowerTable {
public:
    PowerTable(const DiscreteDist& base, long max_power, double prune_eps = 0.0);

    const DiscreteDist& power(long k) const;
    long max_power() const { return static_cast<long>(powers_.size()) - 1; }

private:
    std::vector<DiscreteDist> powers_;
};

struct MixtureComponent {
    double weight = 0.0;        // binomial pmf at k
    DiscreteDist component;     // H * U^(n-k) * V^k
};

// Expands H*F^n, F = (1-p)U + pV, into its binomial mixture: the weighted
// sum of the returned components reproduces H*F^n exactly.
std::vector<MixtureComponent> mixture_expand(const MixtureSpec& spec,
                                             const DiscreteDist& h, long n,
                                             double prune_eps = 0.0);

}  // namespace concbound

#endif  // CONCBOUND_CONVOLUTION_HPP
