#include "seqweight/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "seqweight/rng.hpp"

namespace seqweight {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) {
        throw std::invalid_argument("WeightVector: must hold at least one weight");
    }
    for (double x : w_) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument("WeightVector: weights must be positive and finite");
        }
    }
    ascending_ = w_;
    std::sort(ascending_.begin(), ascending_.end());
}

WeightVector WeightVector::ones(int num_streams) {
    if (num_streams < 1) {
        throw std::invalid_argument("WeightVector::ones: need at least one stream");
    }
    return WeightVector(std::vector<double>(static_cast<size_t>(num_streams), 1.0));
}

std::vector<double> WeightVector::log_values() const {
    std::vector<double> logs(w_.size());
    for (size_t j = 0; j < w_.size(); ++j) logs[j] = std::log(w_[j]);
    return logs;
}

void WeightGenSpec::validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("WeightGenSpec: eta must be >= 0");
    }
    if (!(r >= 1.0) || !std::isfinite(r)) {
        throw std::invalid_argument("WeightGenSpec: r must be >= 1");
    }
    if (!(signal_fraction > 0.0) || !(signal_fraction < 1.0)) {
        throw std::invalid_argument("WeightGenSpec: signal_fraction must lie in (0,1)");
    }
}

double wllr(double lambda, double weight) {
    if (!(weight > 0.0)) {
        throw std::invalid_argument("wllr: weight must be positive");
    }
    return lambda + std::log(weight);
}

static void check_subset_size(int m, int num_streams, const char* who) {
    if (m < 0 || m > num_streams) {
        throw std::out_of_range(std::string(who) + ": subset size out of [0, J]");
    }
}

double price_of_weighting(int m, const WeightVector& weights) {
    const int j_count = weights.size();
    check_subset_size(m, j_count, "price_of_weighting");
    if (m == 0 || m == j_count) return 0.0;
    const auto& asc = weights.ascending();
    double complement_sum = 0.0;
    for (int j = m; j < j_count; ++j) complement_sum += asc[static_cast<size_t>(j)];
    double reciprocal_sum = 0.0;
    for (int k = 0; k < m; ++k) reciprocal_sum += 1.0 / asc[static_cast<size_t>(k)];
    return complement_sum * reciprocal_sum;
}

double price_of_weighting_bruteforce(int m, const WeightVector& weights) {
    const int j_count = weights.size();
    check_subset_size(m, j_count, "price_of_weighting_bruteforce");
    if (j_count > 20) {
        throw std::invalid_argument(
            "price_of_weighting_bruteforce: J > 20, use price_of_weighting");
    }
    if (m == 0 || m == j_count) return 0.0;
    // Enumerate subsets of the ascending-sorted weights so the maximizing
    // subset is summed in the same order as the closed form.
    const auto& asc = weights.ascending();
    double best = 0.0;
    const std::uint32_t full = (1u << j_count) - 1u;
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        if (std::popcount(mask) != m) continue;
        double complement_sum = 0.0;
        double reciprocal_sum = 0.0;
        for (int j = 0; j < j_count; ++j) {
            if (mask & (1u << j)) {
                reciprocal_sum += 1.0 / asc[static_cast<size_t>(j)];
            } else {
                complement_sum += asc[static_cast<size_t>(j)];
            }
        }
        best = std::max(best, complement_sum * reciprocal_sum);
    }
    return best;
}

double max_complement_weight_sum(int l, const WeightVector& weights) {
    const int j_count = weights.size();
    check_subset_size(l, j_count, "max_complement_weight_sum");
    const auto& asc = weights.ascending();
    double sum = 0.0;
    for (int j = l; j < j_count; ++j) sum += asc[static_cast<size_t>(j)];
    return sum;
}

double max_reciprocal_weight_sum(int u, const WeightVector& weights) {
    const int j_count = weights.size();
    check_subset_size(u, j_count, "max_reciprocal_weight_sum");
    const auto& asc = weights.ascending();
    double sum = 0.0;
    for (int k = 0; k < u; ++k) sum += 1.0 / asc[static_cast<size_t>(k)];
    return sum;
}

GuessProbabilities guess_probabilities(const WeightGenSpec& spec) {
    spec.validate();
    const double f = spec.signal_fraction;
    const double denom = 1.0 + (spec.eta - 1.0) * f;
    if (!(denom > 0.0)) {
        throw std::domain_error("guess_probabilities: 1 + (eta-1)*fraction must be positive");
    }
    const GuessProbabilities p{spec.eta * f / denom, f / denom};
    // p1 <= 1 always, but p0 = f/denom exceeds 1 when (2-eta)*fraction > 1;
    // such (eta, fraction) pairs do not describe a guessing scheme
    if (p.p0 > 1.0) {
        throw std::domain_error(
            "guess_probabilities: p0 > 1; eta is too small for this signal fraction");
    }
    return p;
}

WeightVector generate_weights(const WeightGenSpec& spec, const TruthAssignment& truth,
                              std::mt19937_64& rng) {
    const auto [p1, p0] = guess_probabilities(spec);
    const int j_count = truth.num_streams();
    std::vector<double> guesses(static_cast<size_t>(j_count), 0.0);
    double guess_sum = 0.0;
    for (int j = 0; j < j_count; ++j) {
        const double p = truth.is_signal(j) ? p1 : p0;
        const double u = (uniform01(rng) < p) ? 1.0 : 0.0;
        guesses[static_cast<size_t>(j)] = u;
        guess_sum += u;
    }
    const double guess_mean = guess_sum / j_count;
    const double denom = 1.0 + (spec.r - 1.0) * guess_mean;
    std::vector<double> w(static_cast<size_t>(j_count));
    for (int j = 0; j < j_count; ++j) {
        w[static_cast<size_t>(j)] =
            (1.0 + (spec.r - 1.0) * guesses[static_cast<size_t>(j)]) / denom;
    }
    return WeightVector(std::move(w));
}

std::string weights_csv(const WeightVector& weights) {
    std::string out = "stream_index,weight\n";
    char buf[64];
    for (int j = 0; j < weights.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", j, weights[j]);
        out += buf;
    }
    return out;
}

}  // namespace seqweight
