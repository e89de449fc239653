#include "concbound/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace concbound {

namespace {

// Number of extra lattice cells a closed window of length b covers. Ratios
// within 1e-12 (relative) of the next integer count as reaching it, so
// exact multiples survive the floating division.
long window_cells(double b, double step) {
    const double q = b / step;
    long m = static_cast<long>(std::floor(q));
    if (static_cast<double>(m + 1) - q <= 1e-12 * std::max(1.0, q)) {
        ++m;
    }
    return m;
}

}  // namespace

QResult q_exact(const DiscreteDist& f, double b) {
    if (!(b >= 0.0)) {
        throw NonPositiveScale("q_exact requires b >= 0");
    }
    const auto& atoms = f.atoms();
    const std::size_t n = atoms.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + atoms[i].mass;
    }
    QResult best;
    best.value = 0.0;
    best.argmax_x = atoms.front().pos;
    best.certified_error = f.error_budget();
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < i) {
            j = i;
        }
        const double right_edge = atoms[i].pos + b;
        while (j + 1 < n && atoms[j + 1].pos <= right_edge) {
            ++j;
        }
        // Anchor atom's own mass floors the window sum against prefix
        // cancellation noise.
        const double mass = std::max(prefix[j + 1] - prefix[i], atoms[i].mass);
        if (mass > best.value) {
            best.value = mass;
            best.argmax_x = atoms[i].pos;
        }
    }
    return best;
}

QResult q_exact(const LatticeDist& f, double b) {
    if (!(b >= 0.0)) {
        throw NonPositiveScale("q_exact requires b >= 0");
    }
    const auto& w = f.weights();
    const std::size_t n = w.size();
    const long m = window_cells(b, f.step());
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + w[i];
    }
    QResult best;
    best.value = 0.0;
    best.argmax_x = f.offset();
    best.certified_error = f.error_budget();
    for (std::size_t k = 0; k < n; ++k) {
        if (w[k] == 0.0) {
            continue;  // the sup is attained anchored at an atom
        }
        const std::size_t hi = std::min(n - 1, k + static_cast<std::size_t>(m));
        const double mass = std::max(prefix[hi + 1] - prefix[k], w[k]);
        if (mass > best.value) {
            best.value = mass;
            best.argmax_x = f.position(k);
        }
    }
    return best;
}

MonteCarloQ q_monte_carlo(const Sampler& sampler, double b, long num_samples,
                          std::uint64_t seed) {
    if (num_samples < 100) {
        throw BadRange("q_monte_carlo requires at least 100 samples");
    }
    std::mt19937_64 engine(seed);
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(num_samples));
    const double unit = 1.0 / static_cast<double>(num_samples);
    for (long i = 0; i < num_samples; ++i) {
        atoms.push_back({sampler(engine), unit});
    }
    const DiscreteDist empirical = DiscreteDist::from_atoms(std::move(atoms), 0.0);
    MonteCarloQ out;
    out.estimate = q_exact(empirical, b).value;
    out.ci_halfwidth = std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(num_samples)));
    return out;
}

RegularityGap q_regularity_gap(const DiscreteDist& f, double g1, double g2) {
    if (!(g1 > 0.0) || !(g2 > 0.0)) {
        throw NonPositiveScale("q_regularity_gap requires positive scales");
    }
    RegularityGap gap;
    gap.lhs = q_exact(f, g1).value;
    const double int_part = std::floor(g1 / g2);
    gap.rhs = (1.0 + int_part) * q_exact(f, g2).value;
    return gap;
}

}  // namespace concbound
