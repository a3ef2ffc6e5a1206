#include "seqweight/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqweight {

StreamModel StreamModel::gaussian_mean(double mu1) {
    if (!std::isfinite(mu1)) {
        throw std::invalid_argument("StreamModel: mu1 must be finite");
    }
    if (mu1 == 0.0) {
        throw std::invalid_argument("StreamModel: mu1 must be nonzero");
    }
    return StreamModel{ModelKind::GaussianMean, mu1};
}

TruthAssignment::TruthAssignment(int num_streams, std::vector<int> signal_indices)
    : num_streams_(num_streams),
      signals_(std::move(signal_indices)),
      mask_(static_cast<size_t>(std::max(num_streams, 0)), 0) {
    if (num_streams_ < 1) {
        throw std::invalid_argument("TruthAssignment: need at least one stream");
    }
    std::sort(signals_.begin(), signals_.end());
    for (size_t i = 0; i < signals_.size(); ++i) {
        int j = signals_[i];
        if (j < 0 || j >= num_streams_) {
            throw std::out_of_range("TruthAssignment: signal index out of range");
        }
        if (i > 0 && signals_[i - 1] == j) {
            throw std::invalid_argument("TruthAssignment: duplicate signal index");
        }
        mask_[static_cast<size_t>(j)] = 1;
    }
}

double llr_increment(double x, const StreamModel& model) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("llr_increment: observation is not finite");
    }
    if (!std::isfinite(model.mu1)) {
        throw std::invalid_argument("llr_increment: model mu1 is not finite");
    }
    // log[ f1(x) / f0(x) ] for N(mu1,1) vs N(0,1)
    return model.mu1 * x - model.mu1 * model.mu1 / 2.0;
}

KlInfo kl_info(const StreamModel& model) {
    const double i = model.mu1 * model.mu1 / 2.0;
    if (!(i > 0.0) || !std::isfinite(i)) {
        throw std::domain_error("kl_info: KL informations must be strictly positive");
    }
    return KlInfo{i, i};
}

double sample_increment(std::mt19937_64& rng, const StreamModel& model, bool is_signal) {
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    return standard_normal(rng) + (is_signal ? model.mu1 : 0.0);
}

WorstCaseRates worst_case_rates(std::span<const StreamModel> models,
                                const TruthAssignment& truth) {
    if (models.empty()) {
        throw std::invalid_argument("worst_case_rates: no streams");
    }
    if (static_cast<int>(models.size()) != truth.num_streams()) {
        throw std::invalid_argument("worst_case_rates: models/truth size mismatch");
    }
    WorstCaseRates rates;
    for (int j = 0; j < truth.num_streams(); ++j) {
        const KlInfo info = kl_info(models[static_cast<size_t>(j)]);
        if (truth.is_signal(j)) {
            rates.eta1 = rates.eta1 ? std::min(*rates.eta1, info.i1) : info.i1;
        } else {
            rates.eta0 = rates.eta0 ? std::min(*rates.eta0, info.i0) : info.i0;
        }
    }
    return rates;
}

}  // namespace seqweight
