#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "concbound/concentration.hpp"
#include "concbound/convolution.hpp"
#include "concbound/families.hpp"
#include "concbound/measure.hpp"
#include "test_util.hpp"

using namespace concbound;

TEST_CASE("Q of a point mass is 1 for any window") {
    for (double b : {0.0, 0.5, 100.0}) {
        const QResult r = q_exact(DiscreteDist::delta(-3.0), b);
        CHECK(r.value == 1.0);
        CHECK(r.argmax_x == -3.0);
    }
}

TEST_CASE("Q of the half coin at half window") {
    const DiscreteDist half({{0.0, 0.5}, {1.0, 0.5}});
    CHECK(q_exact(half, 0.5).value == 0.5);
    CHECK(q_exact(half, 1.0).value == 1.0);
}

TEST_CASE("Q at b = 0 equals the max mass, checked by enumeration") {
    // Oracle: enumerate the 2^4 outcomes of four half-coin draws.
    std::map<double, double> pmf;
    for (int bits = 0; bits < 16; ++bits) {
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            sum += (bits >> i) & 1;
        }
        pmf[sum] += 1.0 / 16.0;
    }
    const double expected = testutil::q_oracle(pmf, 0.0);
    CHECK(expected == doctest::Approx(0.375));

    const DiscreteDist half({{0.0, 0.5}, {1.0, 0.5}});
    const QResult r = q_exact(conv_power(half, 4), 0.0);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-14));
    CHECK(r.argmax_x == 2.0);
}

TEST_CASE("Q over a uniform ladder") {
    std::vector<Atom> atoms;
    for (int k = 0; k < 10; ++k) {
        atoms.push_back({static_cast<double>(k), 0.1});
    }
    const DiscreteDist ladder(std::move(atoms));
    const QResult r = q_exact(ladder, 2.5);
    CHECK(r.value == doctest::Approx(0.3));
    CHECK(r.argmax_x == 0.0);  // ties resolve to the smallest left endpoint
}

TEST_CASE("q_exact agrees with the window oracle on random measures") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        std::uniform_int_distribution<int> scale(0, 128);
        const double b = static_cast<double>(scale(rng)) / 64.0;
        const double expected = testutil::q_oracle(testutil::to_map(f), b);
        CHECK(q_exact(f, b).value == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("lattice and dense Q agree") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        const auto lat = try_promote_to_lattice(f);
        REQUIRE(lat.has_value());
        std::uniform_int_distribution<int> scale(0, 256);
        const double b = static_cast<double>(scale(rng)) / 64.0;
        const QResult dense = q_exact(f, b);
        const QResult grid = q_exact(*lat, b);
        CHECK(grid.value == doctest::Approx(dense.value).epsilon(1e-13));
        CHECK(grid.argmax_x == doctest::Approx(dense.argmax_x).epsilon(1e-12));
    }
}

TEST_CASE("Q is nondecreasing in the window length") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        double prev = 0.0;
        for (double b : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0}) {
            const double q = q_exact(f, b).value;
            CHECK(q >= prev);
            prev = q;
        }
    }
}

TEST_CASE("Q of powers is nonincreasing for a symmetric family") {
    for (const DiscreteDist& f : {fair_coin(), zero_mean_three_point(0.5, 2.0)}) {
        for (double b : {0.5, 1.0, 3.0}) {
            double prev = 1.0;
            for (long n : {1L, 2L, 4L, 8L, 16L}) {
                const double q = q_exact(conv_power(f, n), b).value;
                CHECK(q <= prev + 1e-14);
                prev = q;
            }
        }
    }
}

TEST_CASE("argmax lands on an atom") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 30; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        const QResult r = q_exact(f, 0.75);
        bool found = false;
        for (const Atom& a : f.atoms()) {
            found = found || a.pos == r.argmax_x;
        }
        CHECK(found);
    }
}

TEST_CASE("QResult respects the carrier budget") {
    const DiscreteDist f({{0.0, 0.6}, {5.0, 0.3}}, 0.1);
    const QResult r = q_exact(f, 1.0);
    CHECK(r.certified_error == 0.1);
    CHECK(r.value == 0.6);
    CHECK(r.value + r.certified_error <= 1.0 + 1e-12);
    CHECK(r.value >= 0.6);  // at least the largest single atom
}

TEST_CASE("lattice window counting is exact at multiples of the step") {
    const LatticeDist lat(0.0, 0.5, {0.25, 0.25, 0.25, 0.25});
    CHECK(q_exact(lat, 0.0).value == 0.25);
    CHECK(q_exact(lat, 0.49999).value == 0.25);
    CHECK(q_exact(lat, 0.5).value == 0.5);
    CHECK(q_exact(lat, 1.0).value == 0.75);
    CHECK(q_exact(lat, 1.5).value == 1.0);
    // 3 * (0.5 - eps) stays below 1.5 after rounding forgiveness
    CHECK(q_exact(lat, 1.4999999).value == 0.75);
}

TEST_CASE("monte carlo Q of a constant sampler is 1") {
    const MonteCarloQ mc = q_monte_carlo([](std::mt19937_64&) { return 4.2; }, 0.1, 1000, 7);
    // All samples merge into one atom whose mass is 1 up to summation dust.
    CHECK(mc.estimate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mc.ci_halfwidth == doctest::Approx(std::sqrt(std::log(40.0) / 2000.0)));
}

TEST_CASE("monte carlo Q is deterministic under a fixed seed") {
    auto sampler = [](std::mt19937_64& rng) {
        return static_cast<double>(std::uniform_int_distribution<int>(0, 9)(rng));
    };
    const MonteCarloQ a = q_monte_carlo(sampler, 2.0, 5000, 12345);
    const MonteCarloQ b = q_monte_carlo(sampler, 2.0, 5000, 12345);
    CHECK(a.estimate == b.estimate);
    const MonteCarloQ c = q_monte_carlo(sampler, 2.0, 5000, 54321);
    CHECK(a.ci_halfwidth == c.ci_halfwidth);
}

TEST_CASE("monte carlo Q brackets the exact coin-sum value") {
    // Sum of 100 fair +-1 coins; the exact value comes from the lattice path.
    const LatticeDist lat = to_lattice(fair_coin(), 2.0, 1e-9);
    const double exact = q_exact(conv_power(lat, 100), 1.0).value;

    auto sampler = [](std::mt19937_64& rng) {
        std::uniform_int_distribution<int> coin(0, 1);
        int sum = 0;
        for (int i = 0; i < 100; ++i) {
            sum += coin(rng) * 2 - 1;
        }
        return static_cast<double>(sum);
    };
    const MonteCarloQ mc = q_monte_carlo(sampler, 1.0, 100000, 20260808);
    CHECK(std::abs(mc.estimate - exact) <= mc.ci_halfwidth);
}

TEST_CASE("monte carlo rejects tiny sample counts") {
    CHECK_THROWS_AS(q_monte_carlo([](std::mt19937_64&) { return 0.0; }, 1.0, 50, 1),
                    BadRange);
}

TEST_CASE("regularity gap hand values") {
    const DiscreteDist half({{0.0, 0.5}, {1.0, 0.5}});
    const RegularityGap gap = q_regularity_gap(half, 1.0, 0.5);
    CHECK(gap.lhs == 1.0);
    CHECK(gap.rhs == doctest::Approx(1.5));

    // Equal scales double the right side.
    const RegularityGap eq = q_regularity_gap(half, 0.75, 0.75);
    CHECK(eq.rhs == doctest::Approx(2.0 * eq.lhs));
    CHECK(eq.lhs <= eq.rhs);
}

TEST_CASE("regularity gap is an inequality on random inputs") {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 1000; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        std::uniform_int_distribution<int> scale(1, 112);
        const double g1 = static_cast<double>(scale(rng)) / 64.0;
        const double g2 = static_cast<double>(scale(rng)) / 64.0;
        const RegularityGap gap = q_regularity_gap(f, g1, g2);
        CHECK(gap.lhs <= gap.rhs);
    }
}

TEST_CASE("product concentration never exceeds either factor") {
    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 200; ++trial) {
        const DiscreteDist f = testutil::random_dist(rng);
        const DiscreteDist h = testutil::random_dist(rng);
        std::uniform_int_distribution<int> scale(1, 112);
        const double g = static_cast<double>(scale(rng)) / 64.0;
        const double q_prod = q_exact(convolve(f, h), g).value;
        CHECK(q_prod <= std::min(q_exact(f, g).value, q_exact(h, g).value) + 1e-15);
    }
}
