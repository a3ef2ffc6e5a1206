#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "seqweight/model.hpp"

using namespace seqweight;

TEST_SUITE("model") {

TEST_CASE("gaussian llr increment") {
    const StreamModel model = StreamModel::gaussian_mean(0.15);
    CHECK(llr_increment(0.0, model) == doctest::Approx(-0.01125).epsilon(1e-14));
    CHECK(llr_increment(1.0, model) == doctest::Approx(0.13875).epsilon(1e-14));
    // the midpoint of the two unit-variance Gaussians carries no evidence
    for (double mu : {0.15, 0.7, -1.3, 2.0}) {
        const StreamModel m = StreamModel::gaussian_mean(mu);
        CHECK(llr_increment(mu / 2.0, m) == 0.0);
    }
}

TEST_CASE("llr increment rejects corrupt observations") {
    const StreamModel model = StreamModel::gaussian_mean(0.15);
    CHECK_THROWS_AS(llr_increment(std::numeric_limits<double>::infinity(), model),
                    std::invalid_argument);
    CHECK_THROWS_AS(llr_increment(std::nan(""), model), std::invalid_argument);
}

TEST_CASE("llr increment is monotone in the observation for mu > 0") {
    const StreamModel model = StreamModel::gaussian_mean(0.6);
    double prev = llr_increment(-5.0, model);
    for (double x = -4.5; x <= 5.0; x += 0.5) {
        const double cur = llr_increment(x, model);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("kl informations") {
    const KlInfo small = kl_info(StreamModel::gaussian_mean(0.15));
    CHECK(small.i0 == doctest::Approx(0.01125).epsilon(1e-14));
    CHECK(small.i1 == doctest::Approx(0.01125).epsilon(1e-14));
    CHECK(small.i0 == small.i1);  // symmetric for the mean-shift model
    const KlInfo unit = kl_info(StreamModel::gaussian_mean(1.0));
    CHECK(unit.i0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(unit.i1 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(kl_info(StreamModel{ModelKind::GaussianMean, 0.0}), std::domain_error);
    CHECK_THROWS_AS(StreamModel::gaussian_mean(0.0), std::invalid_argument);
}

TEST_CASE("sample_increment is reproducible and has the right law") {
    const StreamModel model = StreamModel::gaussian_mean(0.15);
    std::mt19937_64 rng_a(1234), rng_b(1234);
    CHECK(sample_increment(rng_a, model, false) == sample_increment(rng_b, model, false));

    std::mt19937_64 rng(99);
    const int draws = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double x = sample_increment(rng, model, true);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / draws;
    const double var = sum_sq / draws - mean * mean;
    CHECK(std::fabs(mean - 0.15) <= 0.005);
    CHECK(std::fabs(var - 1.0) <= 0.01);
}

TEST_CASE("cumulative llr drifts at the kl rates") {
    const double mu = 0.5;
    const StreamModel model = StreamModel::gaussian_mean(mu);
    const KlInfo info = kl_info(model);
    const int steps = 100'000;
    // increment sd is mu for the mean-shift model
    const double tol = 3.0 * mu / std::sqrt(static_cast<double>(steps));
    std::mt19937_64 rng(7);
    double null_total = 0.0, signal_total = 0.0;
    for (int i = 0; i < steps; ++i) {
        null_total += llr_increment(sample_increment(rng, model, false), model);
        signal_total += llr_increment(sample_increment(rng, model, true), model);
    }
    CHECK(std::fabs(null_total / steps + info.i0) <= tol);
    CHECK(std::fabs(signal_total / steps - info.i1) <= tol);
}

TEST_CASE("truth assignment validation") {
    CHECK_THROWS_AS(TruthAssignment(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(TruthAssignment(3, {3}), std::out_of_range);
    CHECK_THROWS_AS(TruthAssignment(3, {1, 1}), std::invalid_argument);
    const TruthAssignment truth(4, {2, 0});
    CHECK(truth.signals() == std::vector<int>{0, 2});
    CHECK(truth.is_signal(0));
    CHECK_FALSE(truth.is_signal(1));
}

TEST_CASE("worst-case information rates") {
    const StreamModel weak = StreamModel::gaussian_mean(0.15);
    const StreamModel strong = StreamModel::gaussian_mean(1.0);

    SUBCASE("identical streams") {
        const std::vector<StreamModel> models(6, weak);
        const TruthAssignment truth(6, {0, 1});
        const WorstCaseRates rates = worst_case_rates(models, truth);
        REQUIRE(rates.eta1.has_value());
        REQUIRE(rates.eta0.has_value());
        CHECK(*rates.eta1 == doctest::Approx(0.01125).epsilon(1e-14));
        CHECK(*rates.eta0 == doctest::Approx(0.01125).epsilon(1e-14));
    }
    SUBCASE("all streams signal: eta0 is unbounded") {
        const std::vector<StreamModel> models(3, weak);
        const TruthAssignment truth(3, {0, 1, 2});
        const WorstCaseRates rates = worst_case_rates(models, truth);
        CHECK(rates.eta1.has_value());
        CHECK_FALSE(rates.eta0.has_value());
    }
    SUBCASE("minimum over mixed strengths") {
        const std::vector<StreamModel> models{strong, weak};
        const TruthAssignment truth(2, {0, 1});
        const WorstCaseRates rates = worst_case_rates(models, truth);
        CHECK(*rates.eta1 == doctest::Approx(0.01125).epsilon(1e-14));
    }
    SUBCASE("no streams is an error") {
        const std::vector<StreamModel> none;
        CHECK_THROWS_AS(worst_case_rates(none, TruthAssignment(1, {0})),
                        std::invalid_argument);
    }
}

TEST_CASE("trial state starts at zero") {
    const TrialState state(5);
    CHECK(state.n == 0);
    CHECK(state.num_streams() == 5);
    for (double v : state.llr) CHECK(v == 0.0);
}

}  // TEST_SUITE
