#pragma once

#include <random>
#include <string>
#include <vector>

#include "seqweight/model.hpp"

namespace seqweight {

/// Positive per-hypothesis weights. Immutable once constructed; keeps an
/// ascending-sorted copy since every calibration formula works on ordered
/// weights. The library never renormalizes: only relative magnitudes matter
/// to the procedures, and any normalization convention is the caller's.
class WeightVector {
  public:
    explicit WeightVector(std::vector<double> w);
    static WeightVector ones(int num_streams);

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int j) const { return w_[static_cast<size_t>(j)]; }
    const std::vector<double>& values() const { return w_; }
    /// Values sorted ascending (ties keep stream order; value-identical either way).
    const std::vector<double>& ascending() const { return ascending_; }
    /// log(W_j) per stream, the additive head starts used by the procedures.
    std::vector<double> log_values() const;

  private:
    std::vector<double> w_;
    std::vector<double> ascending_;
};

/// Parameters of the binary-guess weight generation scheme: guesses are
/// right about signals with a rate controlled by eta, and a guessed stream's
/// preliminary weight is r (vs 1), normalized afterwards to mean 1.
struct WeightGenSpec {
    double eta = 1.0;              ///< informativeness, >= 0; 1 = uninformative
    double r = 1.0;                ///< strength, >= 1; 1 = unweighted
    double signal_fraction = 0.1;  ///< m/J, in (0,1)

    void validate() const;
};

struct GuessProbabilities {
    double p1 = 0.0;  ///< P(guess=1 | signal)
    double p0 = 0.0;  ///< P(guess=1 | null)
};

/// Weighted LLR: lambda + log(weight). Throws unless weight > 0.
double wllr(double lambda, double weight);

/// Worst-case product (sum of complement weights) * (sum of signal reciprocal
/// weights) over all signal sets of size m — the "price of weighting" that
/// inflates a stopping threshold. Closed form over ordered weights: the
/// maximum is attained by taking the m smallest weights as the signal set.
/// Exactly 0 at m = 0 and m = J (one factor is an empty sum).
double price_of_weighting(int m, const WeightVector& weights);

/// Direct enumeration over all C(J,m) subsets; guard J <= 20. Oracle for the
/// closed form, kept independent of it.
double price_of_weighting_bruteforce(int m, const WeightVector& weights);

/// max over signal sets with |A| in [l, J] of the complement weight sum,
/// i.e. the sum of the J-l largest weights.
double max_complement_weight_sum(int l, const WeightVector& weights);

/// max over signal sets with |A| <= u of the reciprocal weight sum,
/// i.e. the sum of reciprocals of the u smallest weights.
double max_reciprocal_weight_sum(int u, const WeightVector& weights);

/// Guess rates (p1, p0) implied by informativeness eta at the generator's
/// signal fraction; p1 = eta * p0.
GuessProbabilities guess_probabilities(const WeightGenSpec& spec);

/// Draw binary guesses U_j (rate p1 on signals, p0 on nulls, stream order)
/// and return weights (1 + (r-1) U_j) / (1 + (r-1) mean(U)). The realized
/// mean guess is used in the denominator, so the weight mean is 1 up to
/// rounding; r = 1 yields all ones regardless of the draw.
WeightVector generate_weights(const WeightGenSpec& spec, const TruthAssignment& truth,
                              std::mt19937_64& rng);

/// Audit serialization: "stream_index,weight" rows.
std::string weights_csv(const WeightVector& weights);

}  // namespace seqweight
