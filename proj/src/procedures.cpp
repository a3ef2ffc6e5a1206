#include "seqweight/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqweight {

const char* fired_rule_name(FiredRule rule) {
    switch (rule) {
        case FiredRule::Gap: return "gap";
        case FiredRule::Tau1: return "tau1";
        case FiredRule::Tau2: return "tau2";
        case FiredRule::Tau3: return "tau3";
        case FiredRule::TruncatedCap: return "truncated-cap";
    }
    return "unknown";
}

GapConfig::GapConfig(int m_, GapThreshold threshold_, WeightVector weights_)
    : m(m_),
      threshold(std::move(threshold_)),
      weights(std::move(weights_)),
      log_weights(weights.log_values()) {
    if (m < 1 || m > weights.size() - 1) {
        throw std::invalid_argument("GapConfig: m must lie in [1, J-1]");
    }
    if (!threshold.active()) {
        throw std::invalid_argument("GapConfig: threshold must be active");
    }
}

GIConfig::GIConfig(int l_, int u_, GIThresholds thresholds_, WeightVector weights_)
    : l(l_),
      u(u_),
      thresholds(std::move(thresholds_)),
      weights(std::move(weights_)),
      log_weights(weights.log_values()) {
    if (l < 0 || u < l || u > weights.size()) {
        throw std::invalid_argument("GIConfig: need 0 <= l <= u <= J");
    }
    if (thresholds.l != l || thresholds.u != u) {
        throw std::invalid_argument("GIConfig: thresholds were calibrated for another interval");
    }
    // Boundary gap rules only make sense strictly inside [1, J-1].
    if (thresholds.c && (l < 1 || l > weights.size() - 1)) {
        throw std::invalid_argument("GIConfig: active c requires 1 <= l <= J-1");
    }
    if (thresholds.d && (u < 1 || u > weights.size() - 1)) {
        throw std::invalid_argument("GIConfig: active d requires 1 <= u <= J-1");
    }
}

namespace {

// Descending by value, ascending stream index on ties. Deterministic
// decisions even on the measure-zero tie states reachable in tests.
inline bool wllr_before(const std::pair<double, int>& x, const std::pair<double, int>& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
}

thread_local std::vector<double> t_values;

void fill_wllr(const TrialState& state, const std::vector<double>& log_weights,
               std::vector<double>& out) {
    const size_t j_count = state.llr.size();
    out.resize(j_count);
    for (size_t j = 0; j < j_count; ++j) out[j] = state.llr[j] + log_weights[j];
}

// Streams holding the k largest WLLRs under the tie rule, sorted ascending.
std::vector<int> top_k_streams(const TrialState& state,
                               const std::vector<double>& log_weights, int k) {
    const int j_count = state.num_streams();
    std::vector<std::pair<double, int>> ranked(static_cast<size_t>(j_count));
    for (int j = 0; j < j_count; ++j) {
        ranked[static_cast<size_t>(j)] = {state.llr[static_cast<size_t>(j)] +
                                              log_weights[static_cast<size_t>(j)],
                                          j};
    }
    std::nth_element(ranked.begin(), ranked.begin() + (k - 1), ranked.end(), wllr_before);
    std::vector<int> streams(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) streams[static_cast<size_t>(i)] = ranked[static_cast<size_t>(i)].second;
    std::sort(streams.begin(), streams.end());
    return streams;
}

// k-th and (k+1)-th largest of the raw values (1-based k, 1 <= k <= size-1).
// Tie-breaking never changes ordered *values*, so selection on values alone
// matches the full total-order sort.
std::pair<double, double> order_stat_pair(std::vector<double>& values, int k) {
    std::nth_element(values.begin(), values.begin() + (k - 1), values.end(),
                     std::greater<>());
    const double kth = values[static_cast<size_t>(k - 1)];
    const double next = *std::max_element(values.begin() + k, values.end());
    return {kth, next};
}

}  // namespace

std::vector<std::pair<double, int>> ordered_wllr(const TrialState& state,
                                                 const WeightVector& weights) {
    if (state.num_streams() != weights.size()) {
        throw std::invalid_argument("ordered_wllr: state/weights size mismatch");
    }
    std::vector<std::pair<double, int>> ranked(state.llr.size());
    for (int j = 0; j < state.num_streams(); ++j) {
        ranked[static_cast<size_t>(j)] = {wllr(state.llr[static_cast<size_t>(j)], weights[j]), j};
    }
    std::sort(ranked.begin(), ranked.end(), wllr_before);
    return ranked;
}

int count_positive_wllr(const TrialState& state, const WeightVector& weights) {
    if (state.num_streams() != weights.size()) {
        throw std::invalid_argument("count_positive_wllr: state/weights size mismatch");
    }
    const auto logs = weights.log_values();
    int count = 0;
    for (int j = 0; j < state.num_streams(); ++j) {
        if (state.llr[static_cast<size_t>(j)] + logs[static_cast<size_t>(j)] > 0.0) ++count;
    }
    return count;
}

StopStatus gap_step(const TrialState& state, const GapConfig& cfg) {
    if (state.num_streams() != cfg.weights.size()) {
        throw std::invalid_argument("gap_step: state/config size mismatch");
    }
    auto& values = t_values;
    fill_wllr(state, cfg.log_weights, values);
    const auto [kth, next] = order_stat_pair(values, cfg.m);
    if (kth - next >= *cfg.threshold.c) {
        return Decision{state.n, top_k_streams(state, cfg.log_weights, cfg.m),
                        FiredRule::Gap};
    }
    return std::nullopt;
}

namespace {

// Shared by gi_step and the cap outcome: reject the positive-WLLR streams,
// topped up to l with the largest non-positive ones or cut down to the u
// largest. Equivalent to taking the top clamp(p, l, u) streams, because the
// positives are exactly a prefix of the descending WLLR order.
Decision gi_decision(const TrialState& state, const GIConfig& cfg, FiredRule rule) {
    int positive = 0;
    for (int j = 0; j < state.num_streams(); ++j) {
        if (state.llr[static_cast<size_t>(j)] + cfg.log_weights[static_cast<size_t>(j)] > 0.0) {
            ++positive;
        }
    }
    const int k = std::clamp(positive, cfg.l, cfg.u);
    Decision decision{state.n, {}, rule};
    if (k > 0) decision.rejected = top_k_streams(state, cfg.log_weights, k);
    return decision;
}

}  // namespace

StopStatus gi_step(const TrialState& state, const GIConfig& cfg) {
    if (state.num_streams() != cfg.weights.size()) {
        throw std::invalid_argument("gi_step: state/config size mismatch");
    }
    const GIThresholds& th = cfg.thresholds;
    const int j_count = state.num_streams();

    auto& values = t_values;
    fill_wllr(state, cfg.log_weights, values);

    int positive = 0;
    bool all_outside = true;
    for (int j = 0; j < j_count; ++j) {
        const double v = values[static_cast<size_t>(j)];
        if (v > 0.0) ++positive;
        if (v > -th.a && v < th.b) all_outside = false;
    }
    const bool tau2 = all_outside && positive >= cfg.l && positive <= cfg.u;

    bool tau1 = false;
    if (th.c) {
        // c active implies 1 <= l <= J-1, so both order statistics exist.
        const auto [stat_l, stat_l1] = order_stat_pair(values, cfg.l);
        tau1 = stat_l1 <= -th.a && stat_l - stat_l1 >= *th.c;
    }
    bool tau3 = false;
    if (th.d) {
        const auto [stat_u, stat_u1] = order_stat_pair(values, cfg.u);
        tau3 = stat_u >= th.b && stat_u - stat_u1 >= *th.d;
    }

    if (!(tau1 || tau2 || tau3)) return std::nullopt;
    const FiredRule rule = tau1 ? FiredRule::Tau1 : tau2 ? FiredRule::Tau2 : FiredRule::Tau3;
    return gi_decision(state, cfg, rule);
}

namespace {

struct StreamLaw {
    double mu1;         // increment-law coefficient
    double mean;        // observation mean under the truth
    double centering;   // -mu1^2/2
};

std::vector<StreamLaw> make_laws(std::span<const StreamModel> models,
                                 const TruthAssignment& truth) {
    if (static_cast<int>(models.size()) != truth.num_streams()) {
        throw std::invalid_argument("run: models/truth size mismatch");
    }
    std::vector<StreamLaw> laws(models.size());
    for (size_t j = 0; j < models.size(); ++j) {
        const double mu = models[j].mu1;
        if (!std::isfinite(mu) || mu == 0.0) {
            throw std::invalid_argument("run: stream model has degenerate mu1");
        }
        laws[j] = StreamLaw{mu, truth.is_signal(static_cast<int>(j)) ? mu : 0.0,
                            -mu * mu / 2.0};
    }
    return laws;
}

// One observation per stream, LLR update, optional trace. A single normal
// sampler is reused across streams and steps; a paired run with the same
// seed therefore sees the identical path.
template <typename Sampler>
void advance(TrialState& state, const std::vector<StreamLaw>& laws, Sampler& sample,
             const std::vector<double>& log_weights, const TraceSink& trace) {
    ++state.n;
    for (size_t j = 0; j < laws.size(); ++j) {
        const double x = sample() + laws[j].mean;
        state.llr[j] += laws[j].mu1 * x + laws[j].centering;
        if (trace) {
            trace(state.n, static_cast<int>(j), state.llr[j],
                  state.llr[j] + log_weights[j]);
        }
    }
}

}  // namespace

Decision run_gap(std::span<const StreamModel> models, const TruthAssignment& truth,
                 const GapConfig& cfg, std::mt19937_64& rng, std::int64_t max_steps,
                 const TraceSink& trace) {
    if (max_steps < 1) throw std::invalid_argument("run_gap: max_steps must be >= 1");
    const auto laws = make_laws(models, truth);
    TrialState state(truth.num_streams());
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    auto sample = [&] { return standard_normal(rng); };
    for (std::int64_t n = 0; n < max_steps; ++n) {
        advance(state, laws, sample, cfg.log_weights, trace);
        if (StopStatus stop = gap_step(state, cfg)) return *std::move(stop);
    }
    return Decision{max_steps, top_k_streams(state, cfg.log_weights, cfg.m),
                    FiredRule::TruncatedCap};
}

std::int64_t conservative_gap_time(std::span<const StreamModel> models,
                                   const TruthAssignment& truth, const GapConfig& cfg,
                                   std::mt19937_64& rng, std::int64_t max_steps) {
    if (max_steps < 1) {
        throw std::invalid_argument("conservative_gap_time: max_steps must be >= 1");
    }
    if (truth.signal_count() == 0 || truth.signal_count() == truth.num_streams()) {
        throw std::invalid_argument(
            "conservative_gap_time: needs both signals and nulls");
    }
    const auto laws = make_laws(models, truth);
    const double c = *cfg.threshold.c;
    TrialState state(truth.num_streams());
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    auto sample = [&] { return standard_normal(rng); };
    for (std::int64_t n = 0; n < max_steps; ++n) {
        advance(state, laws, sample, cfg.log_weights, {});
        double min_signal = std::numeric_limits<double>::infinity();
        double max_null = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < truth.num_streams(); ++j) {
            const double v = state.llr[static_cast<size_t>(j)] +
                             cfg.log_weights[static_cast<size_t>(j)];
            if (truth.is_signal(j)) {
                min_signal = std::min(min_signal, v);
            } else {
                max_null = std::max(max_null, v);
            }
        }
        if (min_signal > max_null + c) return state.n;
    }
    return max_steps;
}

Decision run_gi(std::span<const StreamModel> models, const TruthAssignment& truth,
                const GIConfig& cfg, std::mt19937_64& rng, std::int64_t max_steps,
                const TraceSink& trace) {
    if (max_steps < 1) throw std::invalid_argument("run_gi: max_steps must be >= 1");
    const auto laws = make_laws(models, truth);
    TrialState state(truth.num_streams());
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    auto sample = [&] { return standard_normal(rng); };
    for (std::int64_t n = 0; n < max_steps; ++n) {
        advance(state, laws, sample, cfg.log_weights, trace);
        if (StopStatus stop = gi_step(state, cfg)) return *std::move(stop);
    }
    return gi_decision(state, cfg, FiredRule::TruncatedCap);
}

double lower_bound_gap(double alpha, double eta1, double eta0) {
    if (!(eta1 > 0.0) || !(eta0 > 0.0)) {
        throw std::domain_error("lower_bound_gap: information rates must be positive");
    }
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::domain_error("lower_bound_gap: alpha must lie in (0,1]");
    }
    return std::abs(std::log(alpha)) / (eta1 + eta0);
}

double lower_bound_gi(double alpha, double beta, int size_a, int l, int u,
                      std::optional<double> eta1, std::optional<double> eta0) {
    if (size_a < l || size_a > u) {
        throw std::invalid_argument("lower_bound_gi: |A| must lie in [l, u]");
    }
    for (const auto& eta : {eta1, eta0}) {
        if (eta && !(*eta > 0.0)) {
            throw std::domain_error("lower_bound_gi: information rates must be positive");
        }
    }
    const double log_alpha = std::abs(std::log(alpha));
    const double log_beta = std::abs(std::log(beta));
    double bound = -1.0;
    bool any = false;
    // A term referencing an unbounded (empty-set) rate is skipped: its
    // denominator is effectively infinite, so it cannot be the binding one.
    auto consider = [&](double numerator, std::optional<double> denom) {
        if (!denom) return;
        bound = std::max(bound, numerator / *denom);
        any = true;
    };
    std::optional<double> eta_sum;
    if (eta1 && eta0) eta_sum = *eta1 + *eta0;
    if (size_a == l) {
        consider(log_beta, eta0);
        consider(log_alpha, eta_sum);
    }
    if (size_a == u) {
        consider(log_alpha, eta1);
        consider(log_beta, eta_sum);
    }
    if (size_a > l && size_a < u) {
        consider(log_beta, eta0);
        consider(log_alpha, eta1);
    }
    if (!any) {
        throw std::domain_error("lower_bound_gi: every term references an unbounded rate");
    }
    return bound;
}

std::int64_t default_max_steps(double alpha, double beta, double eta1, double eta0) {
    if (!(eta1 > 0.0) || !(eta0 > 0.0)) {
        throw std::domain_error("default_max_steps: information rates must be positive");
    }
    const double level = std::min(alpha, beta);
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::domain_error("default_max_steps: error levels must lie in (0,1)");
    }
    return static_cast<std::int64_t>(
        std::ceil(50.0 * std::abs(std::log(level)) / (eta1 + eta0)));
}

}  // namespace seqweight
