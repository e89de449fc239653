#ifndef CONCBOUND_MEASURE_HPP
#define CONCBOUND_MEASURE_HPP

// One-dimensional discrete probability measures and the moment functionals
// used throughout the bound evaluators. Two carriers are provided: a sparse
// sorted atom list (DiscreteDist) and a dense equispaced grid (LatticeDist).
// Every value is immutable after construction and safe to share across
// threads; all operations are pure functions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "concbound/errors.hpp"

namespace concbound {

// Absolute tolerance for the |total mass - 1| <= error_budget + kMassSlack check.
inline constexpr double kMassSlack = 1e-12;
// Atom positions closer than this merge into one cell after convolution.
inline constexpr double kMergeTolerance = 1e-9;
// Mean-zero preconditions are enforced to this absolute tolerance.
inline constexpr double kCenterTolerance = 1e-10;
// Computations abort once the certified total-variation budget reaches this.
inline constexpr double kBudgetAbort = 0.5;

struct Atom {
    double pos = 0.0;
    double mass = 0.0;
};

// Finitely supported measure: atoms strictly increasing by position, all
// masses positive. error_budget certifies |computed - exact| in total
// variation; it grows additively through convolution and pruning.
class DiscreteDist {
public:
    // Requires atoms already sorted with strictly increasing positions.
    DiscreteDist(std::vector<Atom> atoms, double error_budget = 0.0);

    // Sorts, merges positions within kMergeTolerance, drops zero masses.
    static DiscreteDist from_atoms(std::vector<Atom> atoms, double error_budget = 0.0);

    static DiscreteDist delta(double a);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double error_budget() const { return error_budget_; }
    std::size_t size() const { return atoms_.size(); }
    double total_mass() const;
    double min_position() const { return atoms_.front().pos; }
    double max_position() const { return atoms_.back().pos; }

private:
    std::vector<Atom> atoms_;
    double error_budget_ = 0.0;
};

// Measure living on {offset + k*step : k = 0..weights.size()-1} with a dense
// weight vector. First and last weights are nonzero (trimmed support);
// interior zeros are allowed.
class LatticeDist {
public:
    LatticeDist(double offset, double step, std::vector<double> weights,
                double error_budget = 0.0);

    double offset() const { return offset_; }
    double step() const { return step_; }
    const std::vector<double>& weights() const { return weights_; }
    double error_budget() const { return error_budget_; }
    std::size_t size() const { return weights_.size(); }
    double total_mass() const;
    double position(std::size_t k) const { return offset_ + static_cast<double>(k) * step_; }

    // Sparse view; interior zero weights are skipped.
    DiscreteDist to_discrete() const;

private:
    double offset_ = 0.0;
    double step_ = 1.0;
    std::vector<double> weights_;
    double error_budget_ = 0.0;
};

// The decomposition F = (1-p)U + pV. U must be centered (|mean| <= 1e-10)
// with positive second moment; V is arbitrary. p = 0 means F = U.
class MixtureSpec {
public:
    MixtureSpec(double p, DiscreteDist u, DiscreteDist v);

    double p() const { return p_; }
    const DiscreteDist& u() const { return u_; }
    const DiscreteDist& v() const { return v_; }

    // The mixed measure (1-p)U + pV.
    DiscreteDist mixed() const;

private:
    double p_;
    DiscreteDist u_;
    DiscreteDist v_;
};

// Scale functionals of a centered step distribution at sample size n:
// B = sigma*sqrt(n) and beta = n * E[X^2 min(|X|, B)]. beta/B^2 equals
// kappa_n/sigma^2.
struct MomentSummary {
    double sigma2 = 0.0;
    double kappa_n = 0.0;
    double beta = 0.0;
    double B = 0.0;
    long n = 0;
};

struct Moments {
    double mean = 0.0;
    double sigma2 = 0.0;  // raw second moment E X^2 (variance once centered)
};

// Mirror image: atom at -x for each atom at x.
DiscreteDist reflect(const DiscreteDist& f);

// F convolved with its mirror image; symmetric about 0.
DiscreteDist symmetrize(const DiscreteDist& f);

// Exact weighted sums over atoms.
Moments moments(const DiscreteDist& f);

// E[X^2 min(|X|, sigma*sqrt(n))] for centered u with positive variance.
double kappa(const DiscreteDist& u, long n);

// Truncated second moment: sum of mass * min(x^2/b^2, 1). Lies in [0, 1]
// and is nonincreasing in b.
double d_functional(const DiscreteDist& f, double b);

// Same with the cap raised from 1 to `cap`.
double d_functional_capped(const DiscreteDist& f, double b, double cap);

MomentSummary beta_B(const DiscreteDist& xi, long n);

// |sum of mass * exp(i t x)| via separate cosine and sine sums.
double charfn_modulus(const DiscreteDist& f, double t);

double third_abs_moment(const DiscreteDist& f);

// Snaps every atom onto the grid {first_pos + k*step}; throws
// NotLatticeAligned if any atom misses by more than snap_tol. Atoms landing
// in the same cell are merged.
LatticeDist to_lattice(const DiscreteDist& f, double step, double snap_tol);

// Attempts to discover a common step (approximate float gcd of position
// gaps) and promote; returns nullopt when no usable grid exists or the dense
// vector would exceed max_len.
std::optional<LatticeDist> try_promote_to_lattice(const DiscreteDist& f,
                                                  std::size_t max_len = (1u << 26));

// Half the L1 distance between atom masses, matching positions within
// kMergeTolerance.
double total_variation(const DiscreteDist& a, const DiscreteDist& b);

double max_abs_position(const DiscreteDist& f);

}  // namespace concbound

#endif  // CONCBOUND_MEASURE_HPP
