#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "concbound/convolution.hpp"
#include "concbound/families.hpp"
#include "concbound/measure.hpp"
#include "test_util.hpp"

using namespace concbound;
using testutil::conv_oracle;
using testutil::conv_power_oracle;
using testutil::to_map;

namespace {

DiscreteDist from_map(const std::map<double, double>& pmf) {
    std::vector<Atom> atoms;
    for (const auto& [pos, mass] : pmf) {
        atoms.push_back({pos, mass});
    }
    return DiscreteDist::from_atoms(std::move(atoms));
}

}  // namespace

TEST_CASE("convolve point masses") {
    const DiscreteDist d = convolve(DiscreteDist::delta(2.5), DiscreteDist::delta(-1.0));
    REQUIRE(d.size() == 1);
    CHECK(d.atoms()[0].pos == 1.5);
    CHECK(d.atoms()[0].mass == 1.0);
}

TEST_CASE("convolve the half coin with itself") {
    const DiscreteDist half({{0.0, 0.5}, {1.0, 0.5}});
    const DiscreteDist sq = convolve(half, half);
    REQUIRE(sq.size() == 3);
    CHECK(sq.atoms()[0].mass == doctest::Approx(0.25));
    CHECK(sq.atoms()[1].mass == doctest::Approx(0.5));
    CHECK(sq.atoms()[2].mass == doctest::Approx(0.25));
}

TEST_CASE("convolution conserves mass") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        const DiscreteDist g = testutil::random_dist(rng);
        const DiscreteDist fg = convolve(f, g);
        CHECK(fg.total_mass() ==
              doctest::Approx(f.total_mass() * g.total_mass()).epsilon(1e-12));
    }
}

TEST_CASE("convolution is commutative and associative") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        const DiscreteDist g = testutil::random_dist(rng);
        const DiscreteDist h = testutil::random_dist(rng);
        CHECK(total_variation(convolve(f, g), convolve(g, f)) <= 1e-12);
        CHECK(total_variation(convolve(convolve(f, g), h), convolve(f, convolve(g, h))) <=
              1e-12);
    }
}

TEST_CASE("convolve matches the brute-force oracle") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        const DiscreteDist g = testutil::random_dist(rng);
        const DiscreteDist expected = from_map(conv_oracle(to_map(f), to_map(g)));
        CHECK(total_variation(convolve(f, g), expected) <= 1e-13);
    }
}

TEST_CASE("convolve refuses to explode") {
    std::vector<Atom> many;
    const double mass = 1.0 / 5000.0;
    for (int k = 0; k < 5000; ++k) {
        many.push_back({static_cast<double>(k), mass});
    }
    const DiscreteDist big(std::move(many));
    CHECK_THROWS_AS(convolve(big, big), SupportExplosion);
}

TEST_CASE("conv_power identities") {
    std::mt19937_64 rng(34);
    const DiscreteDist f = testutil::random_dist(rng);

    const DiscreteDist f0 = conv_power(f, 0);
    REQUIRE(f0.size() == 1);
    CHECK(f0.atoms()[0].pos == 0.0);
    CHECK(f0.atoms()[0].mass == 1.0);

    CHECK(total_variation(conv_power(f, 1), f) == 0.0);
    CHECK(total_variation(conv_power(f, 2), convolve(f, f)) <= 1e-12);
}

TEST_CASE("conv_power matches the iterated oracle") {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng, 2, 4);
        for (long n : {3L, 5L, 8L}) {
            const DiscreteDist expected = from_map(conv_power_oracle(to_map(f), n));
            CHECK(total_variation(conv_power(f, n), expected) <= 1e-11);
        }
    }
}

TEST_CASE("conv_power splits over exponent sums") {
    std::mt19937_64 rng(36);
    const DiscreteDist f = testutil::random_dist(rng, 2, 4);
    const DiscreteDist lhs = conv_power(f, 7);
    const DiscreteDist rhs = convolve(conv_power(f, 3), conv_power(f, 4));
    CHECK(total_variation(lhs, rhs) <= 1e-12);
}

TEST_CASE("lattice FFT path agrees with dense convolution") {
    const DiscreteDist half({{0.0, 0.5}, {1.0, 0.5}});
    const DiscreteDist dense = from_map(conv_power_oracle(to_map(half), 8));
    const LatticeDist lat = to_lattice(half, 1.0, 1e-9);
    const LatticeDist powered = conv_power(lat, 8);
    CHECK(total_variation(powered.to_discrete(), dense) <= 1e-10);
}

TEST_CASE("lattice and dense powers agree on random grids") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng, 2, 4);
        const auto lat = try_promote_to_lattice(f);
        REQUIRE(lat.has_value());
        for (long n : {2L, 5L, 9L}) {
            const LatticeDist lp = conv_power(*lat, n);
            const DiscreteDist dp = conv_power(f, n);
            CHECK(total_variation(lp.to_discrete(), dp) <= 1e-10);
        }
    }
}

TEST_CASE("pruning charges the budget") {
    const DiscreteDist f({{0.0, 0.2}, {1.0, 0.3}, {2.0, 0.5}});
    const DiscreteDist pruned = prune(f, 0.25);
    REQUIRE(pruned.size() == 2);
    CHECK(pruned.error_budget() == doctest::Approx(0.2));
    CHECK(pruned.total_mass() == doctest::Approx(0.8));
}

TEST_CASE("pruning past the abort threshold throws") {
    const DiscreteDist f({{0.0, 0.2}, {1.0, 0.3}, {2.0, 0.5}}, 0.1);
    CHECK_THROWS_AS(prune(f, 0.4), BudgetExceeded);
}

TEST_CASE("conv_power aborts when aggressive pruning eats the mass") {
    const DiscreteDist f({{0.0, 0.25}, {1.0, 0.25}, {2.0, 0.25}, {3.0, 0.25}});
    CHECK_THROWS_AS(conv_power(f, 8, 0.2), BudgetExceeded);
    CHECK_THROWS_AS(conv_power(f, -1), BadRange);
}

TEST_CASE("lattice convolution rejects mismatched steps") {
    const LatticeDist a(0.0, 1.0, {0.5, 0.5});
    const LatticeDist b(0.0, 0.5, {0.5, 0.5});
    CHECK_THROWS_AS(lattice_convolve(a, b), Error);
}

TEST_CASE("lattice conv_power with pruning keeps a certified budget") {
    const LatticeDist base(0.0, 1.0, std::vector<double>(100, 0.01));
    ErrorBudget acc;
    const LatticeDist powered = conv_power(base, 1000, 1e-16, &acc);
    CHECK(powered.error_budget() < 1e-10);
    CHECK(powered.error_budget() >= acc.fft_residual);
    CHECK(std::abs(powered.total_mass() - 1.0) <= powered.error_budget() + 1e-12);
    // The mean stays put at n * mean(base).
    const Moments m = moments(powered.to_discrete());
    CHECK(m.mean == doctest::Approx(1000.0 * 49.5).epsilon(1e-10));
}

TEST_CASE("pruned lattice powers stay within their certified budget of the exact value") {
    std::mt19937_64 rng(39);
    bool pruned_anything = false;
    for (int trial = 0; trial < 15; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng, 2, 4);
        const auto lat = try_promote_to_lattice(f);
        REQUIRE(lat.has_value());
        const LatticeDist approx = conv_power(*lat, 12, 1e-8);
        const DiscreteDist exact = conv_power(f, 12);
        CHECK(total_variation(approx.to_discrete(), exact) <=
              approx.error_budget() + 1e-10);
        pruned_anything = pruned_anything || approx.error_budget() > 0.0;
    }
    CHECK(pruned_anything);
}

TEST_CASE("binomial_pmf hand values") {
    const BinomialWeights w = binomial_pmf(2, 0.5);
    REQUIRE(w.pmf.size() == 3);
    CHECK(w.pmf[0] == doctest::Approx(0.25));
    CHECK(w.pmf[1] == doctest::Approx(0.5));
    CHECK(w.pmf[2] == doctest::Approx(0.25));

    const BinomialWeights degen = binomial_pmf(5, 0.0);
    CHECK(degen.pmf[0] == 1.0);
    for (std::size_t k = 1; k < degen.pmf.size(); ++k) {
        CHECK(degen.pmf[k] == 0.0);
    }
}

TEST_CASE("binomial_pmf matches Pascal's triangle") {
    // Oracle: exact triangle recurrence, independent of the mode-anchored
    // construction under test.
    for (long n : {1L, 4L, 11L, 20L}) {
        for (double p : {0.1, 0.5, 0.9}) {
            std::vector<double> row = {1.0};
            for (long i = 1; i <= n; ++i) {
                std::vector<double> next(static_cast<std::size_t>(i) + 1, 0.0);
                for (long k = 0; k < i; ++k) {
                    next[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k)] * (1.0 - p);
                    next[static_cast<std::size_t>(k) + 1] += row[static_cast<std::size_t>(k)] * p;
                }
                row = std::move(next);
            }
            const BinomialWeights w = binomial_pmf(n, p);
            for (std::size_t k = 0; k < row.size(); ++k) {
                CHECK(w.pmf[k] == doctest::Approx(row[k]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("binomial_pmf stays normalized at n = 1000") {
    const BinomialWeights w = binomial_pmf(1000, 0.3);
    double total = 0.0;
    for (double v : w.pmf) {
        CHECK(v >= 0.0);
        total += v;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(w.tail_below(0) == 0.0);
    CHECK(w.tail_below(1001) == doctest::Approx(1.0));
}

TEST_CASE("mixture_expand single draw reproduces the mixture") {
    const DiscreteDist coin = fair_coin();
    const DiscreteDist v({{0.0, 0.25}, {3.0, 0.75}});
    const MixtureSpec spec(0.3, coin, v);
    const auto parts = mixture_expand(spec, DiscreteDist::delta(0.0), 1);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].weight == doctest::Approx(0.7));
    CHECK(total_variation(parts[0].component, coin) == 0.0);
    CHECK(parts[1].weight == doctest::Approx(0.3));
    CHECK(total_variation(parts[1].component, v) == 0.0);
}

TEST_CASE("mixture_expand binomial weights at n = 2") {
    const MixtureSpec spec(0.3, fair_coin(), DiscreteDist::delta(2.0));
    const auto parts = mixture_expand(spec, DiscreteDist::delta(0.0), 2);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].weight == doctest::Approx(0.49));
    CHECK(parts[1].weight == doctest::Approx(0.42));
    CHECK(parts[2].weight == doctest::Approx(0.09));
}

TEST_CASE("mixture_expand recombines to the mixed power") {
    std::mt19937_64 rng(38);
    for (int trial = 0; trial < 8; ++trial) {
        const MixtureSpec spec(0.3, testutil::random_centered_dist(rng, 2, 3),
                               testutil::random_dist(rng, 2, 3));
        const DiscreteDist h = testutil::random_dist(rng, 1, 2);
        const long n = 1 + trial;
        const auto parts = mixture_expand(spec, h, n);
        std::vector<Atom> weighted;
        for (const auto& [weight, component] : parts) {
            for (const Atom& a : component.atoms()) {
                if (weight > 0.0) {
                    weighted.push_back({a.pos, weight * a.mass});
                }
            }
        }
        const DiscreteDist recombined = DiscreteDist::from_atoms(std::move(weighted));
        const DiscreteDist expected = convolve(h, conv_power(spec.mixed(), n));
        CHECK(total_variation(recombined, expected) <= 1e-9);
    }
}

TEST_CASE("geometric tail bound holds on a grid") {
    for (long n : {1L, 2L, 10L, 100L, 1000L}) {
        for (double p : {0.01, 0.3, 0.5, 0.77, 0.99}) {
            CHECK(std::pow(p, static_cast<double>(n)) <=
                  std::exp(-static_cast<double>(n) * (1.0 - p)));
        }
    }
}

TEST_CASE("PowerTable rejects out-of-range indices") {
    const PowerTable table(fair_coin(), 4);
    CHECK(table.max_power() == 4);
    CHECK(table.power(0).size() == 1);
    CHECK(table.power(4).size() == 5);
    CHECK_THROWS_AS(table.power(5), BadRange);
    CHECK_THROWS_AS(table.power(-1), BadRange);
}
