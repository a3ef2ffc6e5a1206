#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "seqweight/procedures.hpp"
#include "seqweight/weights.hpp"

namespace seqweight {

struct OracleMismatch {
    std::string input;
    double expected = 0.0;
    double got = 0.0;
};

struct OracleReport {
    std::int64_t checked = 0;
    std::vector<OracleMismatch> mismatches;

    bool passed() const { return mismatches.empty(); }
    std::string to_text() const;
    std::string to_csv() const;
};

/// Closed-form price_of_weighting vs direct subset enumeration, for `trials`
/// random weight vectors with J <= j_max (j_max <= 12) and every m in [0, J].
/// Comparisons are exact: both sides sum in ascending-sorted order.
OracleReport verify_price_closed_form(int j_max, int trials, std::mt19937_64& rng);

/// Closed-form boundary maxima (complement weight sum, reciprocal weight sum)
/// vs enumeration over all signal sets with |A| in [l, u], for every (l, u)
/// pair, J <= j_max <= 10.
OracleReport verify_gi_maxima(int j_max, int trials, std::mt19937_64& rng);

/// Gap step re-derived with a full sort at every call; must agree with
/// gap_step on every input.
StopStatus reference_gap_step(const TrialState& state, const GapConfig& cfg);

/// Differential test of gap_step against reference_gap_step on random states
/// (random weights, signed LLRs, all m), J <= j_max. Mismatches record the
/// stopping decision disagreement.
OracleReport verify_gap_step_agreement(int j_max, int trials, std::mt19937_64& rng);

}  // namespace seqweight
