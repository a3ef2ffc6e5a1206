#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "seqweight/rng.hpp"
#include "seqweight/weights.hpp"

using namespace seqweight;

namespace {

WeightVector random_weights(int j_count, std::mt19937_64& rng) {
    std::vector<double> w(static_cast<size_t>(j_count));
    for (double& x : w) x = std::exp(-2.0 + 4.0 * uniform01(rng));
    return WeightVector(std::move(w));
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("weight vector validation and ordered view") {
    CHECK_THROWS_AS(WeightVector(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({1.0, std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
    const WeightVector w({3.0, 1.0, 2.0});
    CHECK(w.ascending() == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(w.values() == std::vector<double>{3.0, 1.0, 2.0});
    CHECK(WeightVector::ones(4).values() == std::vector<double>(4, 1.0));
}

TEST_CASE("wllr is an additive head start") {
    CHECK(wllr(1.2, 1.0) == 1.2);
    CHECK(wllr(0.0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(wllr(-0.5, 2.0) == doctest::Approx(0.19314718055994531).epsilon(1e-14));
    CHECK_THROWS_AS(wllr(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(wllr(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("price_of_weighting closed form") {
    CHECK(price_of_weighting(2, WeightVector::ones(5)) == 6.0);
    CHECK(price_of_weighting(0, WeightVector({0.5, 2.0, 3.0})) == 0.0);
    CHECK(price_of_weighting(3, WeightVector({0.5, 2.0, 3.0})) == 0.0);
    CHECK(price_of_weighting(2, WeightVector({0.5, 1.0, 1.0, 2.0, 4.0})) == 21.0);
    CHECK_THROWS_AS(price_of_weighting(-1, WeightVector::ones(3)), std::out_of_range);
    CHECK_THROWS_AS(price_of_weighting(4, WeightVector::ones(3)), std::out_of_range);
}

TEST_CASE("price_of_weighting brute force") {
    CHECK(price_of_weighting_bruteforce(2, WeightVector::ones(5)) == 6.0);
    CHECK(price_of_weighting_bruteforce(2, WeightVector({0.5, 1.0, 1.0, 2.0, 4.0})) == 21.0);
    CHECK(price_of_weighting_bruteforce(5, WeightVector::ones(5)) == 0.0);
    CHECK_THROWS_AS(price_of_weighting_bruteforce(1, WeightVector::ones(21)),
                    std::invalid_argument);
}

TEST_CASE("closed form equals enumeration for random weights") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int j_count = 1 + static_cast<int>(uniform_below(rng, 10));
        const WeightVector w = random_weights(j_count, rng);
        for (int m = 0; m <= j_count; ++m) {
            CHECK(price_of_weighting(m, w) == price_of_weighting_bruteforce(m, w));
        }
    }
}

TEST_CASE("price_of_weighting scale invariance") {
    std::mt19937_64 rng(5);
    const WeightVector w = random_weights(7, rng);
    for (int m = 1; m < 7; ++m) {
        std::vector<double> by4(w.values()), by7(w.values());
        for (double& x : by4) x *= 4.0;
        for (double& x : by7) x *= 7.0;
        // powers of two commute with rounding, so gamma = 4 is bit-exact
        CHECK(price_of_weighting(m, WeightVector(by4)) == price_of_weighting(m, w));
        CHECK(price_of_weighting(m, WeightVector(by7)) ==
              doctest::Approx(price_of_weighting(m, w)).epsilon(1e-12));
    }
}

TEST_CASE("unweighted price is m(J - m)") {
    for (int j_count : {2, 5, 9}) {
        for (int m = 0; m <= j_count; ++m) {
            CHECK(price_of_weighting(m, WeightVector::ones(j_count)) ==
                  static_cast<double>(m * (j_count - m)));
        }
    }
}

TEST_CASE("boundary maxima closed forms") {
    const WeightVector w123({1.0, 2.0, 3.0});
    CHECK(max_complement_weight_sum(0, w123) == 6.0);
    CHECK(max_complement_weight_sum(3, w123) == 0.0);
    CHECK(max_complement_weight_sum(1, WeightVector({0.5, 1.0, 1.0, 2.0, 4.0})) == 8.0);
    CHECK(max_reciprocal_weight_sum(0, w123) == 0.0);
    CHECK(max_reciprocal_weight_sum(2, WeightVector({0.5, 1.0, 1.0, 2.0, 4.0})) == 3.0);
    CHECK(max_reciprocal_weight_sum(6, WeightVector::ones(6)) == 6.0);
    CHECK_THROWS_AS(max_complement_weight_sum(4, w123), std::out_of_range);
    CHECK_THROWS_AS(max_reciprocal_weight_sum(-1, w123), std::out_of_range);
}

TEST_CASE("guess probabilities") {
    const auto uninformative = guess_probabilities({1.0, 5.0, 0.1});
    CHECK(uninformative.p1 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(uninformative.p0 == doctest::Approx(0.1).epsilon(1e-14));
    const auto informative = guess_probabilities({20.0, 5.0, 0.1});
    CHECK(informative.p1 == doctest::Approx(0.68965517241379315).epsilon(1e-14));
    CHECK(informative.p0 == doctest::Approx(0.034482758620689655).epsilon(1e-14));
    const auto misinformative = guess_probabilities({0.0, 5.0, 0.1});
    CHECK(misinformative.p1 == 0.0);
    CHECK(misinformative.p0 == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("p1 >= p0 iff eta >= 1") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const double eta = 4.0 * uniform01(rng);
        const double f = 0.05 + 0.9 * uniform01(rng);
        if ((2.0 - eta) * f > 1.0) {
            // no guessing scheme exists: the null rate would exceed 1
            CHECK_THROWS_AS(guess_probabilities({eta, 2.0, f}), std::domain_error);
            continue;
        }
        const auto p = guess_probabilities({eta, 2.0, f});
        CHECK((p.p1 >= p.p0) == (eta >= 1.0));
        CHECK(p.p1 >= 0.0);
        CHECK(p.p1 <= 1.0);
        CHECK(p.p0 >= 0.0);
        CHECK(p.p0 <= 1.0);
        CHECK(p.p1 == doctest::Approx(eta * p.p0).epsilon(1e-12));
    }
}

TEST_CASE("generated weights: r = 1 is exactly unweighted") {
    std::mt19937_64 rng(8);
    const TruthAssignment truth(12, {0, 5});
    for (int trial = 0; trial < 10; ++trial) {
        const WeightVector w = generate_weights({3.0, 1.0, 2.0 / 12.0}, truth, rng);
        CHECK(w.values() == std::vector<double>(12, 1.0));
    }
}

TEST_CASE("generated weights match the two-point normalization formula") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const int j_count = 4 + static_cast<int>(uniform_below(rng, 60));
        const int m = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j_count / 2)));
        std::vector<int> signals(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) signals[static_cast<size_t>(i)] = i;
        const TruthAssignment truth(j_count, std::move(signals));
        const double eta = 0.1 + 8.0 * uniform01(rng);
        const double r = 2.0 + 6.0 * uniform01(rng);
        const WeightVector w =
            generate_weights({eta, r, static_cast<double>(m) / j_count}, truth, rng);

        // infer the realized guess count from the up-weighted streams
        int guessed = 0;
        for (int j = 0; j < j_count; ++j) guessed += w[j] > 1.0 ? 1 : 0;
        if (guessed == 0 && w[0] == 1.0) {
            // all-zero or all-one guess draws both normalize to all ones
            for (int j = 0; j < j_count; ++j) CHECK(w[j] == 1.0);
            continue;
        }
        const double denom = 1.0 + (r - 1.0) * (static_cast<double>(guessed) / j_count);
        for (int j = 0; j < j_count; ++j) {
            const double expected = (w[j] > 1.0 ? (1.0 + (r - 1.0)) : 1.0) / denom;
            CHECK(w[j] == expected);
        }

        // mean weight is 1 up to a few ulps
        long double mean = 0.0L;
        for (int j = 0; j < j_count; ++j) mean += w[j];
        mean /= j_count;
        CHECK(std::fabs(static_cast<double>(mean - 1.0L)) <=
              8.0 * std::numeric_limits<double>::epsilon());
    }
}

TEST_CASE("weights audit csv") {
    const std::string csv = weights_csv(WeightVector({0.5, 2.0}));
    CHECK(csv == "stream_index,weight\n0,0.5\n1,2\n");
}

}  // TEST_SUITE
