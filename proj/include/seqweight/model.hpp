#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace seqweight {

enum class ModelKind { GaussianMean };

/// Simple-vs-simple hypothesis pair for one data stream.
///
/// The only increment law implemented is the unit-variance Gaussian mean
/// shift: N(0,1) under the null, N(mu1,1) under the alternative. The kind
/// tag is the extension point for other random-walk increment laws.
struct StreamModel {
    ModelKind kind = ModelKind::GaussianMean;
    double mu1 = 0.0;

    /// Validated constructor for the Gaussian mean-shift model; mu1 must be
    /// finite and nonzero (zero would make both KL informations vanish).
    static StreamModel gaussian_mean(double mu1);
};

/// Ground truth of a simulated trial: which streams carry signal.
class TruthAssignment {
  public:
    TruthAssignment(int num_streams, std::vector<int> signal_indices);

    int num_streams() const { return num_streams_; }
    int signal_count() const { return static_cast<int>(signals_.size()); }
    bool is_signal(int stream) const { return mask_[static_cast<size_t>(stream)] != 0; }
    /// Signal indices, sorted ascending.
    const std::vector<int>& signals() const { return signals_; }

  private:
    int num_streams_;
    std::vector<int> signals_;
    std::vector<std::uint8_t> mask_;
};

/// Running state of one trial: the time index and per-stream cumulative LLRs.
struct TrialState {
    std::int64_t n = 0;
    std::vector<double> llr;

    explicit TrialState(int num_streams) : llr(static_cast<size_t>(num_streams), 0.0) {}
    int num_streams() const { return static_cast<int>(llr.size()); }
};

struct KlInfo {
    double i0 = 0.0;  ///< -E_null[increment]
    double i1 = 0.0;  ///< E_alt[increment]
};

/// Worst-case information rates over the signal set (eta1) and the null set
/// (eta0). A minimum over an empty set is "unbounded", encoded as nullopt so
/// ratio diagnostics can skip the term instead of dividing by infinity.
struct WorstCaseRates {
    std::optional<double> eta1;
    std::optional<double> eta0;
};

/// Log-likelihood-ratio increment log[f1(x)/f0(x)] of a single observation.
/// For the Gaussian mean shift this is mu1*x - mu1^2/2.
double llr_increment(double x, const StreamModel& model);

/// KL informations (I0, I1) of the stream's component test. Both are mu1^2/2
/// for the Gaussian mean shift. Throws if either would be nonpositive.
KlInfo kl_info(const StreamModel& model);

/// Draw one observation: N(mu1,1) if the stream carries signal, else N(0,1).
double sample_increment(std::mt19937_64& rng, const StreamModel& model, bool is_signal);

/// eta1 = min KL-I1 over signals, eta0 = min KL-I0 over nulls.
WorstCaseRates worst_case_rates(std::span<const StreamModel> models,
                                const TruthAssignment& truth);

}  // namespace seqweight
