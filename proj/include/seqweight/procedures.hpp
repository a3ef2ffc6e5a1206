#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seqweight/model.hpp"
#include "seqweight/thresholds.hpp"
#include "seqweight/weights.hpp"

namespace seqweight {

enum class FiredRule { Gap, Tau1, Tau2, Tau3, TruncatedCap };

const char* fired_rule_name(FiredRule rule);

/// Terminal outcome of one trial: stopping time, rejected streams (sorted
/// ascending), and which stopping rule fired.
struct Decision {
    std::int64_t stop_time = 0;
    std::vector<int> rejected;
    FiredRule fired_rule = FiredRule::Gap;
};

/// One step either continues (nullopt) or stops with a Decision.
using StopStatus = std::optional<Decision>;

/// Observation hook for trace logging: (n, stream, llr, wllr).
using TraceSink = std::function<void(std::int64_t, int, double, double)>;

/// Gap procedure parameters; requires 1 <= m <= J-1 and an active threshold.
struct GapConfig {
    GapConfig(int m, GapThreshold threshold, WeightVector weights);

    int m;
    GapThreshold threshold;
    WeightVector weights;
    std::vector<double> log_weights;  // cached head starts
};

/// Gap-intersection parameters; requires 0 <= l <= u <= J and thresholds
/// whose inactive entries match the interval boundaries.
struct GIConfig {
    GIConfig(int l, int u, GIThresholds thresholds, WeightVector weights);

    int l;
    int u;
    GIThresholds thresholds;
    WeightVector weights;
    std::vector<double> log_weights;
};

/// Current weighted LLRs as (value, stream) pairs sorted descending by value,
/// ties broken by ascending stream index.
std::vector<std::pair<double, int>> ordered_wllr(const TrialState& state,
                                                 const WeightVector& weights);

/// Count of streams with strictly positive weighted LLR.
int count_positive_wllr(const TrialState& state, const WeightVector& weights);

/// Stop iff the gap between the m-th and (m+1)-th largest weighted LLRs is
/// >= c; on stop the decision is the m streams with the largest weighted LLRs.
StopStatus gap_step(const TrialState& state, const GapConfig& cfg);

/// One step of the gap-intersection procedure: the minimum of
///   tau1: (l+1)-th ordered WLLR <= -a and gap over the l boundary >= c,
///   tau2: positive-WLLR count within [l, u] and every WLLR outside (-a, b),
///   tau3: u-th ordered WLLR >= b and gap under the u boundary >= d.
/// Inactive c/d disable tau1/tau3. When several rules hold at the same step
/// the lowest index is reported; the decision set does not depend on that.
/// On stop the rejected set is the positive-WLLR streams: if fewer than l,
/// topped up with the largest non-positive WLLRs; if more than u, cut to the
/// u largest — i.e. the top-k streams with k = clamp(count positive, l, u).
StopStatus gi_step(const TrialState& state, const GIConfig& cfg);

/// Run the gap procedure to its stopping time, sampling one observation per
/// stream per step. Hitting max_steps is a flagged outcome (TruncatedCap with
/// the top-m decision at the cap), not an error.
Decision run_gap(std::span<const StreamModel> models, const TruthAssignment& truth,
                 const GapConfig& cfg, std::mt19937_64& rng, std::int64_t max_steps,
                 const TraceSink& trace = {});

/// First time every signal's weighted LLR strictly exceeds every null's by
/// more than c. Dominates the gap stopping time path-wise when driven by the
/// same seed (sampling order matches run_gap). Returns max_steps on cap.
std::int64_t conservative_gap_time(std::span<const StreamModel> models,
                                   const TruthAssignment& truth, const GapConfig& cfg,
                                   std::mt19937_64& rng, std::int64_t max_steps);

/// Gap-intersection analogue of run_gap; at the cap the decision applies the
/// same clamp(count positive, l, u) truncation to the state at the cap.
Decision run_gi(std::span<const StreamModel> models, const TruthAssignment& truth,
                const GIConfig& cfg, std::mt19937_64& rng, std::int64_t max_steps,
                const TraceSink& trace = {});

/// Asymptotic expected-sample-size floor of any procedure that rejects
/// exactly m streams at family-wise error alpha: |log alpha| / (eta1 + eta0).
double lower_bound_gap(double alpha, double eta1, double eta0);

/// Expected-sample-size floor for a bounded signal count |A| in [l, u];
/// the binding term depends on whether |A| sits at a boundary. Unbounded
/// (nullopt) rates drop the terms that reference them.
double lower_bound_gi(double alpha, double beta, int size_a, int l, int u,
                      std::optional<double> eta1, std::optional<double> eta0);

/// Safety cap for runaway configurations: ceil(50 |log(alpha ^ beta)| / (eta1+eta0)),
/// far above the expected stopping time of a sane setup.
std::int64_t default_max_steps(double alpha, double beta, double eta1, double eta0);

}  // namespace seqweight
