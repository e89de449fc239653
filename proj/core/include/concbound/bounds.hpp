#ifndef CONCBOUND_BOUNDS_HPP
#define CONCBOUND_BOUNDS_HPP

// Evaluators for every concentration-function bound in the registry, each
// with the unknown absolute constant factored out: a report carries the
// exact left-hand side, the right-hand side evaluated with unit constant,
// and their ratio (the implied constant on that scenario). Hypothesis
// violations flag the report instead of refusing, so sweeps can map out
// where a bound stops applying.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "concbound/concentration.hpp"
#include "concbound/convolution.hpp"
#include "concbound/measure.hpp"

namespace concbound {

enum class BoundId {
    th1_general,
    th1_simple,
    cor1,
    mult_1_7,
    cor2,
    esseen_1_11,
    sharpened_1_13,
    cf_1_15,
    cf_1_16,
    lemma1,
};

std::string_view to_string(BoundId id);
BoundId bound_id_from_string(std::string_view name);

struct BoundReport {
    BoundId bound_id = BoundId::lemma1;
    double lhs = 0.0;       // exact Q value
    double rhs_unit = 0.0;  // right-hand side with the constant set to 1
    double implied_c = 0.0; // lhs / rhs_unit; +inf when rhs_unit == 0
    bool hypothesis_ok = true;
    std::map<std::string, double> params;  // everything needed to reproduce
    ErrorBudget budgets;
};

// Q(W^n * G, b) against (b/B) * Q(G, B) with B = sigma*sqrt(n). Flags the
// report when b < beta/B^2.
BoundReport lemma1_rhs(const DiscreteDist& w_base, long n, const DiscreteDist& g,
                       double b);

// Q(H*F^n, b) against b/(sigma*sqrt(n(1-p))) * Q(H, sigma*sqrt(n)).
// Flags when b < kappa_n/sigma^2.
BoundReport cor1_rhs(const MixtureSpec& spec, const DiscreteDist& h, long n, double b);

// Self-referencing form: Q(F^n, b) against
// b/(sigma*sqrt(n*alpha*(1-p))) * Q(F^(n(1-alpha)), sigma*sqrt(n*alpha)).
// n*alpha must be an integer within 1e-9.
BoundReport mult_rhs_1_7(const DiscreteDist& f, const MixtureSpec& spec, long n,
                         double alpha, double b);

// Two-addend form with cutoff r; params carry the addends separately as
// "addend1" and "addend2". With r = 0 this reproduces cor1_rhs bit for bit.
BoundReport th1_simple_rhs(const MixtureSpec& spec, const DiscreteDist& h, long n,
                           long r, double b);

// Full three-part form over the split 0 <= r < s <= n; every Q is computed
// exactly from shared power prefix tables.
BoundReport th1_general_rhs(const MixtureSpec& spec, const DiscreteDist& h, long n,
                            long r, long s, double b);

// Q(F^n, b) against (n * D(symmetrize(F), b))^(-1/2).
BoundReport esseen_rhs_1_11(const DiscreteDist& f, long n, double b);

// Same with the integrand capped at n instead of 1; the implied constant
// here is scenario-dependent and need not stay bounded in n.
BoundReport sharpened_rhs_1_13(const DiscreteDist& f, long n, double b);

// Q(F^n, b) against b * integral of |F-hat|^n over |t| <= 1/b, by adaptive
// Simpson quadrature to absolute tolerance 1e-10.
BoundReport cf_bound_1_15(const DiscreteDist& f, long n, double b);

// Narrow-window variant: (b/sqrt(1-p)) * integral of |F-hat|^(n(1-alpha))
// over |t| <= 1/(sigma*sqrt(n*alpha)). The params carry "cf_1_15_value"
// evaluated at equal (F, n, b) for side-by-side comparison.
BoundReport cf_bound_1_16(const DiscreteDist& f, const MixtureSpec& spec, long n,
                          double alpha, double b);

// Q(F^n, b) against b(delta+sigma) / (delta*sigma*n*sqrt((1-p) D(F~, delta*sqrt(n)))).
BoundReport cor2_rhs(const MixtureSpec& spec, long n, double b, double delta);

struct HolderSum {
    double lhs = 0.0;         // sum over k in [r, n) of pmf[k]/sqrt(n-k)
    double normalized = 0.0;  // lhs * sqrt(n(1-p)); bounded by an absolute constant
};

HolderSum holder_lhs_2_9(long n, double p, long r);

struct ConstantEstimate {
    double c_hat = 0.0;
    BoundReport witness;
};

// Maximum implied constant over the family, skipping hypothesis-violating
// scenarios. Throws EmptyFamily if nothing qualifies. Deterministic: ties
// keep the earliest scenario.
ConstantEstimate estimate_constant(const std::vector<BoundReport>& family, BoundId id);

// Least-squares slope of log(c) against log(n); the boundedness checks
// assert this stays near 0 (or near 1/2 for the heavy-tailed family).
double fit_loglog_slope(const std::vector<std::pair<double, double>>& n_and_c);

}  // namespace concbound

#endif  // CONCBOUND_BOUNDS_HPP
