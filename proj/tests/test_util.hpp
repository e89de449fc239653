#ifndef CONCBOUND_TEST_UTIL_HPP
#define CONCBOUND_TEST_UTIL_HPP

// Shared generators and independent oracles for the unit tests. Everything
// here stays deliberately naive: oracles must not share code paths with the
// implementations they check.

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "concbound/measure.hpp"

namespace testutil {

using concbound::Atom;
using concbound::DiscreteDist;

// Atoms on the grid k/64 so sums and comparisons stay exact in binary64.
inline DiscreteDist random_dist(std::mt19937_64& rng, int min_atoms = 2,
                                int max_atoms = 6) {
    std::uniform_int_distribution<int> count_dist(min_atoms, max_atoms);
    const int count = count_dist(rng);
    std::set<int> grid;
    std::uniform_int_distribution<int> pos_dist(-320, 320);
    while (static_cast<int>(grid.size()) < count) {
        grid.insert(pos_dist(rng));
    }
    std::uniform_real_distribution<double> mass_dist(0.1, 1.0);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int k : grid) {
        const double mass = mass_dist(rng);
        atoms.push_back({static_cast<double>(k) / 64.0, mass});
        total += mass;
    }
    for (Atom& a : atoms) {
        a.mass /= total;
    }
    return DiscreteDist(std::move(atoms));
}

inline DiscreteDist random_centered_dist(std::mt19937_64& rng, int min_atoms = 2,
                                         int max_atoms = 6) {
    DiscreteDist raw = random_dist(rng, std::max(2, min_atoms), max_atoms);
    std::vector<Atom> atoms = raw.atoms();
    double mean = 0.0;
    for (const Atom& a : atoms) {
        mean += a.mass * a.pos;
    }
    for (Atom& a : atoms) {
        a.pos -= mean;
    }
    return DiscreteDist(std::move(atoms));
}

// Brute-force convolution over a position-keyed map. Exact for the dyadic
// positions the generators above produce.
inline std::map<double, double> conv_oracle(const std::map<double, double>& f,
                                            const std::map<double, double>& g) {
    std::map<double, double> out;
    for (const auto& [xf, mf] : f) {
        for (const auto& [xg, mg] : g) {
            out[xf + xg] += mf * mg;
        }
    }
    return out;
}

inline std::map<double, double> to_map(const DiscreteDist& d) {
    std::map<double, double> out;
    for (const Atom& a : d.atoms()) {
        out[a.pos] += a.mass;
    }
    return out;
}

inline std::map<double, double> conv_power_oracle(const std::map<double, double>& f,
                                                  long n) {
    std::map<double, double> acc = {{0.0, 1.0}};
    for (long i = 0; i < n; ++i) {
        acc = conv_oracle(acc, f);
    }
    return acc;
}

// Central binomial mass C(n, n/2) / 2^n by a plain product of ratios.
inline double central_binomial_mass(long n) {
    const long half = n / 2;
    double value = 1.0;
    for (long k = 1; k <= half; ++k) {
        value *= static_cast<double>(half + k) / static_cast<double>(k);
        value /= 4.0;
    }
    return value;
}

// Max over closed windows [x, x+b] of an exact pmf map; windows anchored at
// atoms.
inline double q_oracle(const std::map<double, double>& pmf, double b) {
    double best = 0.0;
    for (auto it = pmf.begin(); it != pmf.end(); ++it) {
        double sum = 0.0;
        for (auto jt = it; jt != pmf.end() && jt->first <= it->first + b; ++jt) {
            sum += jt->second;
        }
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace testutil

#endif  // CONCBOUND_TEST_UTIL_HPP
