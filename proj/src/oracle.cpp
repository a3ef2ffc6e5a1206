#include "seqweight/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "seqweight/rng.hpp"

namespace seqweight {

std::string OracleReport::to_text() const {
    char head[96];
    std::snprintf(head, sizeof head, "checked %lld comparison(s), %zu mismatch(es)\n",
                  static_cast<long long>(checked), mismatches.size());
    std::string out = head;
    for (const auto& mm : mismatches) {
        char line[192];
        std::snprintf(line, sizeof line, "  MISMATCH %s: expected %.17g, got %.17g\n",
                      mm.input.c_str(), mm.expected, mm.got);
        out += line;
    }
    return out;
}

std::string OracleReport::to_csv() const {
    std::string out = "input,expected,got\n";
    for (const auto& mm : mismatches) {
        char line[192];
        std::snprintf(line, sizeof line, "%s,%.17g,%.17g\n", mm.input.c_str(),
                      mm.expected, mm.got);
        out += line;
    }
    return out;
}

namespace {

// Random positive weights, log-uniform over roughly [e^-2, e^2].
std::vector<double> random_weights(int j_count, std::mt19937_64& rng) {
    std::vector<double> w(static_cast<size_t>(j_count));
    for (double& x : w) x = std::exp(-2.0 + 4.0 * uniform01(rng));
    return w;
}

std::string describe(const char* what, int j_count, int trial, int arg) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s[trial=%d J=%d arg=%d]", what, trial, j_count, arg);
    return buf;
}

}  // namespace

OracleReport verify_price_closed_form(int j_max, int trials, std::mt19937_64& rng) {
    if (j_max < 1 || j_max > 12) {
        throw std::invalid_argument("verify_price_closed_form: j_max must lie in [1, 12]");
    }
    OracleReport report;
    for (int t = 0; t < trials; ++t) {
        const int j_count = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j_max)));
        const WeightVector weights(random_weights(j_count, rng));
        for (int m = 0; m <= j_count; ++m) {
            const double closed = price_of_weighting(m, weights);
            const double brute = price_of_weighting_bruteforce(m, weights);
            ++report.checked;
            if (closed != brute) {
                report.mismatches.push_back(
                    {describe("price_of_weighting", j_count, t, m), brute, closed});
            }
        }
    }
    return report;
}

OracleReport verify_gi_maxima(int j_max, int trials, std::mt19937_64& rng) {
    if (j_max < 1 || j_max > 10) {
        throw std::invalid_argument("verify_gi_maxima: j_max must lie in [1, 10]");
    }
    OracleReport report;
    for (int t = 0; t < trials; ++t) {
        const int j_count = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j_max)));
        const WeightVector weights(random_weights(j_count, rng));
        const auto& asc = weights.ascending();

        // Best complement sum / reciprocal sum over subsets of each size;
        // summation in ascending-sorted order matches the closed forms.
        std::vector<double> best_comp(static_cast<size_t>(j_count) + 1, 0.0);
        std::vector<double> best_recip(static_cast<size_t>(j_count) + 1, 0.0);
        const std::uint32_t full = (1u << j_count) - 1u;
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            const int size = std::popcount(mask);
            double comp = 0.0, recip = 0.0;
            for (int j = 0; j < j_count; ++j) {
                if (mask & (1u << j)) {
                    recip += 1.0 / asc[static_cast<size_t>(j)];
                } else {
                    comp += asc[static_cast<size_t>(j)];
                }
            }
            best_comp[static_cast<size_t>(size)] = std::max(best_comp[static_cast<size_t>(size)], comp);
            best_recip[static_cast<size_t>(size)] = std::max(best_recip[static_cast<size_t>(size)], recip);
        }

        for (int l = 0; l <= j_count; ++l) {
            for (int u = l; u <= j_count; ++u) {
                // max over |A| in [l, u]: complement sum decreases with |A|,
                // reciprocal sum increases, but take enumerated maxima anyway.
                double enum_comp = 0.0, enum_recip = 0.0;
                for (int s = l; s <= u; ++s) {
                    enum_comp = std::max(enum_comp, best_comp[static_cast<size_t>(s)]);
                    enum_recip = std::max(enum_recip, best_recip[static_cast<size_t>(s)]);
                }
                const double closed_comp = max_complement_weight_sum(l, weights);
                const double closed_recip = max_reciprocal_weight_sum(u, weights);
                report.checked += 2;
                if (closed_comp != enum_comp) {
                    report.mismatches.push_back(
                        {describe("max_complement_weight_sum", j_count, t, l), enum_comp,
                         closed_comp});
                }
                if (closed_recip != enum_recip) {
                    report.mismatches.push_back(
                        {describe("max_reciprocal_weight_sum", j_count, t, u), enum_recip,
                         closed_recip});
                }
            }
        }
    }
    return report;
}

StopStatus reference_gap_step(const TrialState& state, const GapConfig& cfg) {
    const auto ranked = ordered_wllr(state, cfg.weights);
    const size_t m = static_cast<size_t>(cfg.m);
    if (ranked[m - 1].first - ranked[m].first >= *cfg.threshold.c) {
        std::vector<int> rejected(m);
        for (size_t i = 0; i < m; ++i) rejected[i] = ranked[i].second;
        std::sort(rejected.begin(), rejected.end());
        return Decision{state.n, std::move(rejected), FiredRule::Gap};
    }
    return std::nullopt;
}

OracleReport verify_gap_step_agreement(int j_max, int trials, std::mt19937_64& rng) {
    if (j_max < 2) {
        throw std::invalid_argument("verify_gap_step_agreement: j_max must be >= 2");
    }
    OracleReport report;
    for (int t = 0; t < trials; ++t) {
        const int j_count = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j_max - 1)));
        const int m = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j_count - 1)));
        WeightVector weights(random_weights(j_count, rng));
        // Low thresholds so both branches are exercised; occasional ties via
        // rounded LLR values.
        GapThreshold threshold{0.5 + 2.0 * uniform01(rng), 0.05, m};
        GapConfig cfg(m, threshold, std::move(weights));
        TrialState state(j_count);
        state.n = 1;
        for (double& v : state.llr) {
            v = std::round((-4.0 + 8.0 * uniform01(rng)) * 4.0) / 4.0;
        }
        const StopStatus fast = gap_step(state, cfg);
        const StopStatus ref = reference_gap_step(state, cfg);
        ++report.checked;
        const bool same = fast.has_value() == ref.has_value() &&
                          (!fast || (fast->rejected == ref->rejected &&
                                     fast->stop_time == ref->stop_time));
        if (!same) {
            report.mismatches.push_back({describe("gap_step", j_count, t, m),
                                         ref.has_value() ? 1.0 : 0.0,
                                         fast.has_value() ? 1.0 : 0.0});
        }
    }
    return report;
}

}  // namespace seqweight
