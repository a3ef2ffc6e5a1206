#pragma once

#include <optional>
#include <string>

#include "seqweight/model.hpp"
#include "seqweight/weights.hpp"

namespace seqweight {

/// Stopping threshold of the gap procedure. `c` is nullopt when the rule it
/// feeds is disabled; an inactive threshold is a distinct state, never a
/// large negative float.
struct GapThreshold {
    std::optional<double> c;
    double alpha = 0.0;
    int m = 0;

    bool active() const { return c.has_value(); }
};

/// Thresholds of the gap-intersection procedure. `a`/`b` bound the central
/// indecision region of the intersection rule; `c`/`d` are the boundary gap
/// thresholds, inactive (nullopt) when l = 0 resp. u = J.
struct GIThresholds {
    double a = 0.0;
    double b = 0.0;
    std::optional<double> c;
    std::optional<double> d;
    double alpha = 0.0;
    double beta = 0.0;
    int l = 0;
    int u = 0;
};

/// Least conservative threshold with a family-wise error guarantee at level
/// alpha for a known signal count m: c = |log alpha| + log price_of_weighting(m, J).
/// Requires 1 <= m <= J-1. Recompute per realized weight vector when weights
/// are random.
GapThreshold calibrate_gap(double alpha, int m, const WeightVector& weights);

/// Thresholds at exact equality with the sufficient conditions for type I /
/// type II family-wise error control at (alpha, beta) when the signal count
/// lies in [l, u]:
///   b = |log(alpha/2)| + log(sum of the J-l largest weights)
///   a = |log(beta/2)|  + log(sum of reciprocals of the u smallest weights)
///   c = |log(alpha/2)| + log price_of_weighting(l, J)   (inactive if l = 0)
///   d = |log(beta/2)|  + log price_of_weighting(u, J)   (inactive if u = J)
/// Requires 0 <= l <= u <= J, u >= 1, l <= J-1.
GIThresholds calibrate_gi(double alpha, double beta, int l, int u,
                          const WeightVector& weights);

/// Upper bound on P(decision != A) of the gap procedure at threshold c:
/// exp(-c) * (sum of null weights) * (sum of signal reciprocal weights).
/// A bound, not a probability; may exceed 1.
double fwe_bound_gap(double c, const TruthAssignment& truth, const WeightVector& weights);

struct FweBounds {
    double type1 = 0.0;
    double type2 = 0.0;
};

/// Upper bounds on the type I / type II family-wise error of the
/// gap-intersection procedure for a given truth. The boundary terms enter
/// only when |A| equals l resp. u and the matching threshold is active.
FweBounds fwe_bounds_gi(const GIThresholds& th, const TruthAssignment& truth,
                        const WeightVector& weights);

/// Calibration rows for the run manifest (header + one row).
std::string calibration_csv(const GapThreshold& th, const WeightVector& weights);
std::string calibration_csv(const GIThresholds& th, const WeightVector& weights);

}  // namespace seqweight
