#include "concbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "concbound/quadrature.hpp"

namespace concbound {

namespace {

constexpr double kIntegerSplitTol = 1e-9;

double ratio_or_inf(double lhs, double rhs) {
    if (rhs == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return lhs / rhs;
}

void finish(BoundReport& r) {
    r.implied_c = ratio_or_inf(r.lhs, r.rhs_unit);
}

// Shared moment/scale package for the mixture-based evaluators.
struct MixtureScales {
    double sigma = 0.0;
    double sigma2 = 0.0;
    double kappa_n = 0.0;
    double scale_condition = 0.0;  // kappa_n / sigma^2
};

MixtureScales mixture_scales(const MixtureSpec& spec, long n) {
    MixtureScales s;
    Moments m = moments(spec.u());
    s.sigma2 = m.sigma2;
    s.sigma = std::sqrt(m.sigma2);
    s.kappa_n = kappa(spec.u(), n);
    s.scale_condition = s.kappa_n / s.sigma2;
    return s;
}

long checked_integer_split(long n, double alpha) {
    const double exact = static_cast<double>(n) * alpha;
    const long rounded = std::lround(exact);
    if (std::abs(exact - static_cast<double>(rounded)) > kIntegerSplitTol) {
        std::ostringstream msg;
        msg << "n*alpha = " << exact << " is not an integer within " << kIntegerSplitTol;
        throw NonIntegerSplit(msg.str());
    }
    return rounded;
}

void record_budget(BoundReport& r, const DiscreteDist& carrier) {
    r.budgets.pruned_mass += carrier.error_budget();
}

}  // namespace

std::string_view to_string(BoundId id) {
    switch (id) {
        case BoundId::th1_general: return "th1_general";
        case BoundId::th1_simple: return "th1_simple";
        case BoundId::cor1: return "cor1";
        case BoundId::mult_1_7: return "mult_1_7";
        case BoundId::cor2: return "cor2";
        case BoundId::esseen_1_11: return "esseen_1_11";
        case BoundId::sharpened_1_13: return "sharpened_1_13";
        case BoundId::cf_1_15: return "cf_1_15";
        case BoundId::cf_1_16: return "cf_1_16";
        case BoundId::lemma1: return "lemma1";
    }
    return "unknown";
}

BoundId bound_id_from_string(std::string_view name) {
    for (BoundId id : {BoundId::th1_general, BoundId::th1_simple, BoundId::cor1,
                       BoundId::mult_1_7, BoundId::cor2, BoundId::esseen_1_11,
                       BoundId::sharpened_1_13, BoundId::cf_1_15, BoundId::cf_1_16,
                       BoundId::lemma1}) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw ParseError("unknown bound id: " + std::string(name));
}

BoundReport lemma1_rhs(const DiscreteDist& w_base, long n, const DiscreteDist& g,
                       double b) {
    const MomentSummary ms = beta_B(w_base, n);
    BoundReport r;
    r.bound_id = BoundId::lemma1;

    const DiscreteDist w_n = conv_power(w_base, n);
    const DiscreteDist product = convolve(w_n, g);
    r.lhs = q_exact(product, b).value;
    r.rhs_unit = (b / ms.B) * q_exact(g, ms.B).value;
    r.hypothesis_ok = b >= ms.beta / (ms.B * ms.B);

    r.params["n"] = static_cast<double>(n);
    r.params["b"] = b;
    r.params["sigma2"] = ms.sigma2;
    r.params["beta"] = ms.beta;
    r.params["B"] = ms.B;
    record_budget(r, product);
    finish(r);
    return r;
}

BoundReport th1_simple_rhs(const MixtureSpec& spec, const DiscreteDist& h, long n,
                           long r_cut, double b) {
    if (r_cut < 0 || r_cut > n) {
        throw BadRange("th1_simple_rhs requires 0 <= r <= n");
    }
    const MixtureScales sc = mixture_scales(spec, n);
    const double root_n = std::sqrt(static_cast<double>(n));
    const double big_scale = sc.sigma * root_n;

    BoundReport r;
    r.bound_id = BoundId::th1_simple;

    const DiscreteDist f = spec.mixed();
    const DiscreteDist hfn = convolve(h, conv_power(f, n));
    r.lhs = q_exact(hfn, b).value;

    const DiscreteDist hvr = convolve(h, conv_power(spec.v(), r_cut));
    const double addend1 =
        b / (sc.sigma * std::sqrt(static_cast<double>(n) * (1.0 - spec.p()))) *
        q_exact(hvr, big_scale).value;

    const BinomialWeights pmf = binomial_pmf(n, spec.p());
    const double tail = pmf.tail_below(r_cut);
    const double shrink =
        b / (sc.sigma * std::sqrt(static_cast<double>(n - r_cut))) *
        q_exact(h, big_scale).value;
    const double addend2 = std::min(1.0, shrink) * tail;

    r.rhs_unit = addend1 + addend2;
    r.hypothesis_ok = b >= sc.scale_condition;

    r.params["n"] = static_cast<double>(n);
    r.params["r"] = static_cast<double>(r_cut);
    r.params["b"] = b;
    r.params["p"] = spec.p();
    r.params["sigma2"] = sc.sigma2;
    r.params["kappa_n"] = sc.kappa_n;
    r.params["addend1"] = addend1;
    r.params["addend2"] = addend2;
    r.params["p_mu_below_r"] = tail;
    record_budget(r, hfn);
    finish(r);
    return r;
}

BoundReport cor1_rhs(const MixtureSpec& spec, const DiscreteDist& h, long n, double b) {
    // The r = 0 cut: the second addend vanishes with P(mu < 0) = 0, leaving
    // exactly the single-term form.
    BoundReport r = th1_simple_rhs(spec, h, n, 0, b);
    r.bound_id = BoundId::cor1;
    r.params.erase("r");
    r.params.erase("addend1");
    r.params.erase("addend2");
    r.params.erase("p_mu_below_r");
    return r;
}

BoundReport th1_general_rhs(const MixtureSpec& spec, const DiscreteDist& h, long n,
                            long r_cut, long s_cut, double b) {
    if (!(0 <= r_cut && r_cut < s_cut && s_cut <= n)) {
        std::ostringstream msg;
        msg << "th1_general_rhs requires 0 <= r < s <= n, got r = " << r_cut
            << ", s = " << s_cut << ", n = " << n;
        throw BadRange(msg.str());
    }
    const MixtureScales sc = mixture_scales(spec, n);
    const double root_n = std::sqrt(static_cast<double>(n));
    const double big_scale = sc.sigma * root_n;

    BoundReport r;
    r.bound_id = BoundId::th1_general;

    const DiscreteDist f = spec.mixed();
    const DiscreteDist hfn = convolve(h, conv_power(f, n));
    r.lhs = q_exact(hfn, b).value;

    const BinomialWeights pmf = binomial_pmf(n, spec.p());
    const PowerTable u_powers(spec.u(), n);
    const PowerTable v_powers(spec.v(), n);

    // Middle range [r, s): the rescaled Q of H V^k at scale sigma*sqrt(n-k).
    double middle = 0.0;
    for (long k = r_cut; k < s_cut; ++k) {
        const double rem = std::sqrt(static_cast<double>(n - k));
        const DiscreteDist hvk = convolve(h, v_powers.power(k));
        middle += pmf.pmf[static_cast<std::size_t>(k)] * (b / (sc.sigma * rem)) *
                  q_exact(hvk, sc.sigma * rem).value;
    }

    // Upper range [s, n]: the raw Q of the conditional components at b.
    double upper = 0.0;
    for (long k = s_cut; k <= n; ++k) {
        const DiscreteDist component =
            convolve(convolve(h, u_powers.power(n - k)), v_powers.power(k));
        upper += pmf.pmf[static_cast<std::size_t>(k)] * q_exact(component, b).value;
    }

    const double tail = pmf.tail_below(r_cut);
    const double shrink =
        b / (sc.sigma * std::sqrt(static_cast<double>(n - r_cut))) *
        q_exact(h, big_scale).value;
    const double lower = std::min(1.0, shrink) * tail;

    r.rhs_unit = middle + upper + lower;
    r.hypothesis_ok = b >= sc.scale_condition;

    r.params["n"] = static_cast<double>(n);
    r.params["r"] = static_cast<double>(r_cut);
    r.params["s"] = static_cast<double>(s_cut);
    r.params["b"] = b;
    r.params["p"] = spec.p();
    r.params["sigma2"] = sc.sigma2;
    r.params["kappa_n"] = sc.kappa_n;
    r.params["addend_middle"] = middle;
    r.params["addend_upper"] = upper;
    r.params["addend_lower"] = lower;
    record_budget(r, hfn);
    finish(r);
    return r;
}

BoundReport mult_rhs_1_7(const DiscreteDist& f, const MixtureSpec& spec, long n,
                         double alpha, double b) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw BadRange("mult_rhs_1_7 requires alpha in (0, 1)");
    }
    const long n_alpha = checked_integer_split(n, alpha);
    const MixtureScales sc = mixture_scales(spec, std::max<long>(1, n_alpha));
    const double inner_scale = sc.sigma * std::sqrt(static_cast<double>(n_alpha));

    BoundReport r;
    r.bound_id = BoundId::mult_1_7;

    const DiscreteDist fn = conv_power(f, n);
    r.lhs = q_exact(fn, b).value;

    const DiscreteDist f_rest = conv_power(f, n - n_alpha);
    r.rhs_unit =
        b / (sc.sigma * std::sqrt(static_cast<double>(n_alpha) * (1.0 - spec.p()))) *
        q_exact(f_rest, inner_scale).value;
    r.hypothesis_ok = b >= sc.scale_condition;

    r.params["n"] = static_cast<double>(n);
    r.params["alpha"] = alpha;
    r.params["b"] = b;
    r.params["p"] = spec.p();
    r.params["sigma2"] = sc.sigma2;
    r.params["kappa_nalpha"] = sc.kappa_n;
    record_budget(r, fn);
    finish(r);
    return r;
}

BoundReport esseen_rhs_1_11(const DiscreteDist& f, long n, double b) {
    if (!(b > 0.0)) {
        throw NonPositiveScale("esseen_rhs_1_11 requires b > 0");
    }
    const DiscreteDist sym = symmetrize(f);
    const double d = d_functional(sym, b);
    if (d == 0.0) {
        throw DegenerateSymmetrization("the symmetrized measure is a point mass at 0");
    }
    BoundReport r;
    r.bound_id = BoundId::esseen_1_11;
    const DiscreteDist fn = conv_power(f, n);
    r.lhs = q_exact(fn, b).value;
    r.rhs_unit = 1.0 / std::sqrt(static_cast<double>(n) * d);
    r.params["n"] = static_cast<double>(n);
    r.params["b"] = b;
    r.params["d_sym"] = d;
    // The truncated-integral rewriting of the same bound; equal by
    // construction since D is that integral.
    r.params["rhs_rewritten"] = r.rhs_unit;
    record_budget(r, fn);
    finish(r);
    return r;
}

BoundReport sharpened_rhs_1_13(const DiscreteDist& f, long n, double b) {
    if (!(b > 0.0)) {
        throw NonPositiveScale("sharpened_rhs_1_13 requires b > 0");
    }
    const DiscreteDist sym = symmetrize(f);
    const double d = d_functional_capped(sym, b, static_cast<double>(n));
    if (d == 0.0) {
        throw DegenerateSymmetrization("the symmetrized measure is a point mass at 0");
    }
    BoundReport r;
    r.bound_id = BoundId::sharpened_1_13;
    const DiscreteDist fn = conv_power(f, n);
    r.lhs = q_exact(fn, b).value;
    r.rhs_unit = 1.0 / std::sqrt(static_cast<double>(n) * d);
    r.params["n"] = static_cast<double>(n);
    r.params["b"] = b;
    r.params["d_sym_capped"] = d;
    record_budget(r, fn);
    finish(r);
    return r;
}

BoundReport cf_bound_1_15(const DiscreteDist& f, long n, double b) {
    if (!(b > 0.0)) {
        throw NonPositiveScale("cf_bound_1_15 requires b > 0");
    }
    BoundReport r;
    r.bound_id = BoundId::cf_1_15;
    const DiscreteDist fn = conv_power(f, n);
    r.lhs = q_exact(fn, b).value;
    r.rhs_unit = b * charfn_power_integral(f, n, 1.0 / b, b);
    r.params["n"] = static_cast<double>(n);
    r.params["b"] = b;
    record_budget(r, fn);
    finish(r);
    return r;
}

BoundReport cf_bound_1_16(const DiscreteDist& f, const MixtureSpec& spec, long n,
                          double alpha, double b) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw BadRange("cf_bound_1_16 requires alpha in (0, 1)");
    }
    if (!(b > 0.0)) {
        throw NonPositiveScale("cf_bound_1_16 requires b > 0");
    }
    const long n_alpha = checked_integer_split(n, alpha);
    Moments m = moments(spec.u());
    const double sigma = std::sqrt(m.sigma2);
    const double window_scale = sigma * std::sqrt(static_cast<double>(n_alpha));

    BoundReport r;
    r.bound_id = BoundId::cf_1_16;
    const DiscreteDist fn = conv_power(f, n);
    r.lhs = q_exact(fn, b).value;
    r.rhs_unit = b / std::sqrt(1.0 - spec.p()) *
                 charfn_power_integral(f, n - n_alpha, 1.0 / window_scale, window_scale);
    // Third-absolute-moment scale condition for the narrow-window form.
    r.hypothesis_ok = b >= third_abs_moment(spec.u()) / m.sigma2;

    r.params["n"] = static_cast<double>(n);
    r.params["alpha"] = alpha;
    r.params["b"] = b;
    r.params["p"] = spec.p();
    r.params["cf_1_15_value"] = cf_bound_1_15(f, n, b).rhs_unit;
    record_budget(r, fn);
    finish(r);
    return r;
}

BoundReport cor2_rhs(const MixtureSpec& spec, long n, double b, double delta) {
    if (!(delta > 0.0)) {
        throw NonPositiveScale("cor2_rhs requires delta > 0");
    }
    const MixtureScales sc = mixture_scales(spec, n);
    const DiscreteDist f = spec.mixed();
    const DiscreteDist sym = symmetrize(f);
    const double d = d_functional(sym, delta * std::sqrt(static_cast<double>(n)));
    if (d == 0.0) {
        throw DegenerateSymmetrization("the symmetrized measure is a point mass at 0");
    }

    BoundReport r;
    r.bound_id = BoundId::cor2;
    const DiscreteDist fn = conv_power(f, n);
    r.lhs = q_exact(fn, b).value;
    r.rhs_unit = b * (delta + sc.sigma) /
                 (delta * sc.sigma * static_cast<double>(n) *
                  std::sqrt((1.0 - spec.p()) * d));
    r.hypothesis_ok = b >= sc.scale_condition;

    r.params["n"] = static_cast<double>(n);
    r.params["b"] = b;
    r.params["delta"] = delta;
    r.params["p"] = spec.p();
    r.params["sigma2"] = sc.sigma2;
    r.params["d_sym"] = d;
    record_budget(r, fn);
    finish(r);
    return r;
}

HolderSum holder_lhs_2_9(long n, double p, long r) {
    if (r < 0 || r > n) {
        throw BadRange("holder_lhs_2_9 requires 0 <= r <= n");
    }
    const BinomialWeights pmf = binomial_pmf(n, p);
    HolderSum out;
    for (long k = r; k < n; ++k) {
        out.lhs += pmf.pmf[static_cast<std::size_t>(k)] /
                   std::sqrt(static_cast<double>(n - k));
    }
    out.normalized = out.lhs * std::sqrt(static_cast<double>(n) * (1.0 - p));
    return out;
}

ConstantEstimate estimate_constant(const std::vector<BoundReport>& family, BoundId id) {
    const BoundReport* best = nullptr;
    for (const BoundReport& r : family) {
        if (r.bound_id != id || !r.hypothesis_ok) {
            continue;
        }
        if (best == nullptr || r.implied_c > best->implied_c) {
            best = &r;
        }
    }
    if (best == nullptr) {
        throw EmptyFamily("no hypothesis-satisfying scenario for " +
                          std::string(to_string(id)));
    }
    return {best->implied_c, *best};
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& n_and_c) {
    if (n_and_c.size() < 2) {
        throw BadRange("fit_loglog_slope needs at least two points");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [n, c] : n_and_c) {
        sx += std::log(n);
        sy += std::log(c);
    }
    const double mx = sx / static_cast<double>(n_and_c.size());
    const double my = sy / static_cast<double>(n_and_c.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [n, c] : n_and_c) {
        const double dx = std::log(n) - mx;
        const double dy = std::log(c) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    return sxy / sxx;
}

}  // namespace concbound
