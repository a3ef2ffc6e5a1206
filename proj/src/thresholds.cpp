#include "seqweight/thresholds.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace seqweight {

static void check_level(double level, const char* name) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument(std::string("calibrate: ") + name +
                                    " must lie in (0,1)");
    }
}

GapThreshold calibrate_gap(double alpha, int m, const WeightVector& weights) {
    check_level(alpha, "alpha");
    const int j_count = weights.size();
    if (m < 1 || m > j_count - 1) {
        throw std::invalid_argument(
            "calibrate_gap: m must lie in [1, J-1]; the gap between the m-th and "
            "(m+1)-th order statistics is undefined otherwise");
    }
    const double c = std::abs(std::log(alpha)) + std::log(price_of_weighting(m, weights));
    return GapThreshold{c, alpha, m};
}

GIThresholds calibrate_gi(double alpha, double beta, int l, int u,
                          const WeightVector& weights) {
    check_level(alpha, "alpha");
    check_level(beta, "beta");
    const int j_count = weights.size();
    if (l < 0 || u < l || u > j_count) {
        throw std::invalid_argument("calibrate_gi: need 0 <= l <= u <= J");
    }
    if (u == 0 || l == j_count) {
        // |A| pinned to 0 or J leaves nothing to test and puts log(0) into a/b.
        throw std::invalid_argument("calibrate_gi: degenerate interval (u = 0 or l = J)");
    }
    GIThresholds th;
    th.alpha = alpha;
    th.beta = beta;
    th.l = l;
    th.u = u;
    th.b = std::abs(std::log(alpha / 2.0)) + std::log(max_complement_weight_sum(l, weights));
    th.a = std::abs(std::log(beta / 2.0)) + std::log(max_reciprocal_weight_sum(u, weights));
    const double price_l = price_of_weighting(l, weights);
    const double price_u = price_of_weighting(u, weights);
    if (price_l > 0.0) th.c = std::abs(std::log(alpha / 2.0)) + std::log(price_l);
    if (price_u > 0.0) th.d = std::abs(std::log(beta / 2.0)) + std::log(price_u);
    return th;
}

static double complement_weight_sum(const TruthAssignment& truth, const WeightVector& w) {
    double sum = 0.0;
    for (int j = 0; j < truth.num_streams(); ++j) {
        if (!truth.is_signal(j)) sum += w[j];
    }
    return sum;
}

static double signal_reciprocal_sum(const TruthAssignment& truth, const WeightVector& w) {
    double sum = 0.0;
    for (int k : truth.signals()) sum += 1.0 / w[k];
    return sum;
}

double fwe_bound_gap(double c, const TruthAssignment& truth, const WeightVector& weights) {
    if (truth.num_streams() != weights.size()) {
        throw std::invalid_argument("fwe_bound_gap: truth/weights size mismatch");
    }
    return std::exp(-c) * complement_weight_sum(truth, weights) *
           signal_reciprocal_sum(truth, weights);
}

FweBounds fwe_bounds_gi(const GIThresholds& th, const TruthAssignment& truth,
                        const WeightVector& weights) {
    if (truth.num_streams() != weights.size()) {
        throw std::invalid_argument("fwe_bounds_gi: truth/weights size mismatch");
    }
    const double comp_sum = complement_weight_sum(truth, weights);
    const double recip_sum = signal_reciprocal_sum(truth, weights);
    const int size_a = truth.signal_count();
    FweBounds bounds;
    bounds.type1 = std::exp(-th.b) * comp_sum;
    if (size_a == th.l && th.c) {
        bounds.type1 += std::exp(-*th.c) * comp_sum * recip_sum;
    }
    bounds.type2 = std::exp(-th.a) * recip_sum;
    if (size_a == th.u && th.d) {
        bounds.type2 += std::exp(-*th.d) * comp_sum * recip_sum;
    }
    return bounds;
}

static std::string fmt_threshold(const std::optional<double>& v) {
    if (!v) return "inactive";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::string calibration_csv(const GapThreshold& th, const WeightVector& weights) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "alpha,m,c,price_of_weighting\n%.17g,%d,%s,%.17g\n",
                  th.alpha, th.m, fmt_threshold(th.c).c_str(),
                  price_of_weighting(th.m, weights));
    return buf;
}

std::string calibration_csv(const GIThresholds& th, const WeightVector& weights) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "alpha,beta,l,u,a,b,c,d,price_l,price_u\n"
                  "%.17g,%.17g,%d,%d,%.17g,%.17g,%s,%s,%.17g,%.17g\n",
                  th.alpha, th.beta, th.l, th.u, th.a, th.b, fmt_threshold(th.c).c_str(),
                  fmt_threshold(th.d).c_str(), price_of_weighting(th.l, weights),
                  price_of_weighting(th.u, weights));
    return buf;
}

}  // namespace seqweight
