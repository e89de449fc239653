#include "concbound/convolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <mutex>
#include <optional>
#include <sstream>

#include <fftw3.h>

namespace concbound {

namespace {

// Relative threshold for clamping negative FFT artifacts: anything more
// negative than 1e-14 * output length is a genuine numerical failure.
constexpr double kFftClampScale = 1e-14;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwRealBuffer {
    double* data = nullptr;
    explicit FftwRealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {
        if (data == nullptr) {
            throw std::bad_alloc();
        }
    }
    ~FftwRealBuffer() { fftw_free(data); }
    FftwRealBuffer(const FftwRealBuffer&) = delete;
    FftwRealBuffer& operator=(const FftwRealBuffer&) = delete;
};

struct FftwComplexBuffer {
    fftw_complex* data = nullptr;
    explicit FftwComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (data == nullptr) {
            throw std::bad_alloc();
        }
    }
    ~FftwComplexBuffer() { fftw_free(data); }
    FftwComplexBuffer(const FftwComplexBuffer&) = delete;
    FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
};

struct FftwPlan {
    fftw_plan plan = nullptr;
    ~FftwPlan() {
        if (plan != nullptr) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

struct FftConvResult {
    std::vector<double> values;
    double clamped = 0.0;
};

// Cyclic real convolution, zero-padded to the next power of two, truncated
// to the linear convolution length. Negative artifacts within the clamp
// threshold are zeroed and their magnitudes summed.
FftConvResult fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = std::bit_ceil(out_len);
    if (n > kFftCap) {
        std::ostringstream msg;
        msg << "FFT buffer of length " << n << " exceeds the cap " << kFftCap;
        throw SupportExplosion(msg.str());
    }
    const std::size_t spec_len = n / 2 + 1;
    const bool square = (&a == &b);

    FftwRealBuffer real_buf(n);
    FftwComplexBuffer spec_a(spec_len);
    FftwComplexBuffer spec_b(square ? 1 : spec_len);

    auto forward = [&](const std::vector<double>& src, fftw_complex* dst) {
        std::copy(src.begin(), src.end(), real_buf.data);
        std::fill(real_buf.data + src.size(), real_buf.data + n, 0.0);
        FftwPlan plan;
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            plan.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_buf.data, dst,
                                             FFTW_ESTIMATE);
        }
        fftw_execute(plan.plan);
    };

    forward(a, spec_a.data);
    if (!square) {
        forward(b, spec_b.data);
    }

    for (std::size_t i = 0; i < spec_len; ++i) {
        const std::complex<double> za(spec_a.data[i][0], spec_a.data[i][1]);
        const std::complex<double> zb =
            square ? za : std::complex<double>(spec_b.data[i][0], spec_b.data[i][1]);
        const std::complex<double> prod = za * zb;
        spec_a.data[i][0] = prod.real();
        spec_a.data[i][1] = prod.imag();
    }

    FftwPlan inverse;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        inverse.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_a.data,
                                            real_buf.data, FFTW_ESTIMATE);
    }
    fftw_execute(inverse.plan);

    FftConvResult result;
    result.values.resize(out_len);
    const double scale = 1.0 / static_cast<double>(n);
    const double clamp_threshold = kFftClampScale * static_cast<double>(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        double w = real_buf.data[i] * scale;
        if (w < 0.0) {
            if (-w > clamp_threshold) {
                std::ostringstream msg;
                msg << "FFT convolution produced negative mass " << w
                    << " beyond the clamp threshold " << clamp_threshold;
                throw Error(msg.str());
            }
            result.clamped += -w;
            w = 0.0;
        }
        result.values[i] = w;
    }
    return result;
}

double combined_budget(double ea, double eb) {
    return ea + eb + ea * eb;
}

void check_budget(double total) {
    if (total >= kBudgetAbort) {
        std::ostringstream msg;
        msg << "accumulated error budget " << total << " reached the abort threshold";
        throw BudgetExceeded(msg.str());
    }
}

// Zeroes sub-eps weights into `dropped` and trims zero ends. Keeps the
// heaviest entry if everything falls below eps.
void prune_weights(std::vector<double>& w, double eps, double& dropped,
                   std::size_t& first_kept) {
    first_kept = 0;
    if (eps > 0.0) {
        const std::size_t heaviest =
            static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] < eps && i != heaviest) {
                dropped += w[i];
                w[i] = 0.0;
            }
        }
    }
    std::size_t lo = 0;
    std::size_t hi = w.size();
    while (lo < hi && w[lo] == 0.0) {
        ++lo;
    }
    while (hi > lo && w[hi - 1] == 0.0) {
        --hi;
    }
    first_kept = lo;
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(hi), w.end());
    w.erase(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(lo));
}

}  // namespace

double BinomialWeights::tail_below(long r) const {
    double sum = 0.0;
    const long hi = std::min(r, n + 1);
    for (long k = 0; k < hi; ++k) {
        sum += pmf[static_cast<std::size_t>(k)];
    }
    return sum;
}

BinomialWeights binomial_pmf(long n, double p) {
    if (n < 1) {
        throw BadRange("binomial_pmf requires n >= 1");
    }
    if (!(p >= 0.0) || !(p < 1.0)) {
        throw BadRange("binomial_pmf requires p in [0, 1)");
    }
    BinomialWeights w;
    w.n = n;
    w.p = p;
    w.pmf.assign(static_cast<std::size_t>(n) + 1, 0.0);
    if (p == 0.0) {
        w.pmf[0] = 1.0;
        return w;
    }
    // Largest term sits at the mode; both recurrences then move downhill,
    // multiplying by ratios < 1, which keeps them stable.
    const double q = 1.0 - p;
    const long mode = std::min<long>(n, static_cast<long>(std::floor((n + 1) * p)));
    const double log_mode = std::lgamma(static_cast<double>(n) + 1.0) -
                            std::lgamma(static_cast<double>(mode) + 1.0) -
                            std::lgamma(static_cast<double>(n - mode) + 1.0) +
                            static_cast<double>(mode) * std::log(p) +
                            static_cast<double>(n - mode) * std::log(q);
    w.pmf[static_cast<std::size_t>(mode)] = std::exp(log_mode);
    const double odds = p / q;
    for (long k = mode; k < n; ++k) {
        w.pmf[static_cast<std::size_t>(k) + 1] = w.pmf[static_cast<std::size_t>(k)] *
                                                 static_cast<double>(n - k) /
                                                 static_cast<double>(k + 1) * odds;
    }
    for (long k = mode; k > 0; --k) {
        w.pmf[static_cast<std::size_t>(k) - 1] = w.pmf[static_cast<std::size_t>(k)] *
                                                 static_cast<double>(k) /
                                                 static_cast<double>(n - k + 1) / odds;
    }
    return w;
}

DiscreteDist convolve(const DiscreteDist& f, const DiscreteDist& g) {
    const auto& fa = f.atoms();
    const auto& ga = g.atoms();
    if (fa.size() > kDenseAtomCap / ga.size()) {
        std::ostringstream msg;
        msg << "dense convolution of " << fa.size() << " x " << ga.size()
            << " atoms exceeds the cap " << kDenseAtomCap;
        throw SupportExplosion(msg.str());
    }
    std::vector<Atom> sums;
    sums.reserve(fa.size() * ga.size());
    for (const Atom& x : fa) {
        for (const Atom& y : ga) {
            sums.push_back({x.pos + y.pos, x.mass * y.mass});
        }
    }
    return DiscreteDist::from_atoms(std::move(sums),
                                    combined_budget(f.error_budget(), g.error_budget()));
}

DiscreteDist prune(const DiscreteDist& f, double eps) {
    if (eps <= 0.0) {
        return f;
    }
    const auto& atoms = f.atoms();
    std::size_t heaviest = 0;
    for (std::size_t i = 1; i < atoms.size(); ++i) {
        if (atoms[i].mass > atoms[heaviest].mass) {
            heaviest = i;
        }
    }
    std::vector<Atom> kept;
    kept.reserve(atoms.size());
    double dropped = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].mass < eps && i != heaviest) {
            dropped += atoms[i].mass;
        } else {
            kept.push_back(atoms[i]);
        }
    }
    return DiscreteDist(std::move(kept), f.error_budget() + dropped);
}

LatticeDist prune(const LatticeDist& f, double eps) {
    if (eps <= 0.0) {
        return f;
    }
    std::vector<double> w = f.weights();
    double dropped = 0.0;
    std::size_t first_kept = 0;
    prune_weights(w, eps, dropped, first_kept);
    return LatticeDist(f.position(first_kept), f.step(), std::move(w),
                       f.error_budget() + dropped);
}

LatticeDist lattice_convolve(const LatticeDist& a, const LatticeDist& b, ErrorBudget* acc) {
    const double step = a.step();
    if (std::abs(a.step() - b.step()) > 1e-12 * std::max(a.step(), b.step())) {
        throw Error("lattice convolution requires equal steps");
    }
    FftConvResult conv = fft_convolve(a.weights(), b.weights());
    double dropped = 0.0;
    std::size_t first_kept = 0;
    prune_weights(conv.values, 0.0, dropped, first_kept);  // trim clamped zero ends only
    const double budget =
        combined_budget(a.error_budget(), b.error_budget()) + conv.clamped;
    check_budget(budget);
    if (acc != nullptr) {
        acc->fft_residual += conv.clamped;
    }
    const double offset =
        a.offset() + b.offset() + static_cast<double>(first_kept) * step;
    return LatticeDist(offset, step, std::move(conv.values), budget);
}

namespace {

LatticeDist lattice_square(const LatticeDist& a, ErrorBudget* acc) {
    FftConvResult conv = fft_convolve(a.weights(), a.weights());
    double dropped = 0.0;
    std::size_t first_kept = 0;
    prune_weights(conv.values, 0.0, dropped, first_kept);
    const double budget =
        combined_budget(a.error_budget(), a.error_budget()) + conv.clamped;
    check_budget(budget);
    if (acc != nullptr) {
        acc->fft_residual += conv.clamped;
    }
    const double offset = 2.0 * a.offset() + static_cast<double>(first_kept) * a.step();
    return LatticeDist(offset, a.step(), std::move(conv.values), budget);
}

// Square-and-multiply. A base error at power m doubles with every further
// squaring, so base prunes use the downscaled threshold eps*m/n: every
// dropped sliver then contributes at most its face value to the final
// certified budget, while the result chain prunes at full strength.
template <typename Dist, typename MulFn, typename SqrFn, typename PruneFn>
Dist binary_power(const Dist& base, long n, MulFn mul, SqrFn sqr, PruneFn prune_fn,
                  const Dist& unit, double prune_eps) {
    if (n < 0) {
        throw BadRange("conv_power requires n >= 0");
    }
    if (n == 0) {
        return unit;
    }
    if (n == 1) {
        return base;
    }
    Dist acc_base = base;
    std::optional<Dist> result;
    long e = n;
    long base_power = 1;
    while (e > 0) {
        if ((e & 1) != 0) {
            result = result.has_value() ? prune_fn(mul(*result, acc_base), prune_eps)
                                        : acc_base;
        }
        e >>= 1;
        if (e > 0) {
            base_power *= 2;
            const double base_eps =
                prune_eps * static_cast<double>(base_power) / static_cast<double>(n);
            acc_base = prune_fn(sqr(acc_base), base_eps);
        }
    }
    return *result;
}

}  // namespace

DiscreteDist conv_power(const DiscreteDist& f, long n, double prune_eps, ErrorBudget* acc) {
    double pruned_before = 0.0;
    auto track_prune = [&](const DiscreteDist& d, double eps) {
        const double before = d.error_budget();
        DiscreteDist out = prune(d, eps);
        pruned_before += out.error_budget() - before;
        return out;
    };
    DiscreteDist result = binary_power(
        f, n, [](const DiscreteDist& a, const DiscreteDist& b) { return convolve(a, b); },
        [](const DiscreteDist& a) { return convolve(a, a); }, track_prune,
        DiscreteDist::delta(0.0), prune_eps);
    check_budget(result.error_budget());
    if (acc != nullptr) {
        acc->pruned_mass += pruned_before;
    }
    return result;
}

LatticeDist conv_power(const LatticeDist& f, long n, double prune_eps, ErrorBudget* acc) {
    ErrorBudget local;
    double pruned = 0.0;
    auto track_prune = [&](const LatticeDist& d, double eps) {
        const double before = d.error_budget();
        LatticeDist out = prune(d, eps);
        pruned += out.error_budget() - before;
        return out;
    };
    LatticeDist unit(0.0, f.step(), {1.0}, 0.0);
    LatticeDist result = binary_power(
        f, n,
        [&](const LatticeDist& a, const LatticeDist& b) {
            return lattice_convolve(a, b, &local);
        },
        [&](const LatticeDist& a) { return lattice_square(a, &local); }, track_prune,
        unit, prune_eps);
    check_budget(result.error_budget());
    if (acc != nullptr) {
        acc->pruned_mass += pruned;
        acc->fft_residual += local.fft_residual;
    }
    return result;
}

PowerTable::PowerTable(const DiscreteDist& base, long max_power, double prune_eps) {
    if (max_power < 0) {
        throw BadRange("PowerTable requires max_power >= 0");
    }
    powers_.reserve(static_cast<std::size_t>(max_power) + 1);
    powers_.push_back(DiscreteDist::delta(0.0));
    for (long k = 1; k <= max_power; ++k) {
        powers_.push_back(prune(convolve(powers_.back(), base), prune_eps));
    }
}

const DiscreteDist& PowerTable::power(long k) const {
    if (k < 0 || k > max_power()) {
        throw BadRange("power index out of table range");
    }
    return powers_[static_cast<std::size_t>(k)];
}

std::vector<MixtureComponent> mixture_expand(const MixtureSpec& spec,
                                             const DiscreteDist& h, long n,
                                             double prune_eps) {
    if (n < 1) {
        throw BadRange("mixture_expand requires n >= 1");
    }
    const BinomialWeights pmf = binomial_pmf(n, spec.p());
    const PowerTable u_powers(spec.u(), n, prune_eps);
    const PowerTable v_powers(spec.v(), n, prune_eps);
    std::vector<MixtureComponent> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) {
        DiscreteDist component = convolve(convolve(h, u_powers.power(n - k)), v_powers.power(k));
        out.push_back({pmf.pmf[static_cast<std::size_t>(k)], std::move(component)});
    }
    return out;
}

}  // namespace concbound
