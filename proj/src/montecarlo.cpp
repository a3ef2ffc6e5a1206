#include "seqweight/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "seqweight/rng.hpp"
#include "seqweight/thresholds.hpp"
#include "seqweight/version.hpp"
#include "seqweight/weights.hpp"

namespace seqweight {

void ScenarioSpec::validate() const {
    if (name.empty()) throw std::invalid_argument("scenario: name must not be empty");
    if (name.find_first_of(",\n=") != std::string::npos) {
        throw std::invalid_argument("scenario '" + name +
                                    "': name must not contain ',', '=' or newlines");
    }
    if (num_streams < 2) throw std::invalid_argument("scenario '" + name + "': J must be >= 2");
    if (!(signal_fraction > 0.0) || !(signal_fraction < 1.0)) {
        throw std::invalid_argument("scenario '" + name + "': signal_fraction must lie in (0,1)");
    }
    if (!std::isfinite(mu) || mu == 0.0) {
        throw std::invalid_argument("scenario '" + name + "': mu must be finite and nonzero");
    }
    for (auto [level, label] : {std::pair{alpha, "alpha"}, std::pair{beta, "beta"}}) {
        if (!(level > 0.0) || !(level < 1.0)) {
            throw std::invalid_argument("scenario '" + name + "': " + label +
                                        " must lie in (0,1)");
        }
    }
    if (!(eta >= 0.0)) throw std::invalid_argument("scenario '" + name + "': eta must be >= 0");
    if (!(r >= 1.0)) throw std::invalid_argument("scenario '" + name + "': r must be >= 1");
    if (reps < 1) throw std::invalid_argument("scenario '" + name + "': reps must be >= 1");
    const int m = resolved_signal_count(*this);
    if (procedure == Procedure::Gap) {
        if (m < 1 || m > num_streams - 1) {
            throw std::invalid_argument("scenario '" + name +
                                        "': resolved m must lie in [1, J-1]");
        }
    } else {
        if (l < 0 || u < l || u > num_streams) {
            throw std::invalid_argument("scenario '" + name + "': need 0 <= l <= u <= J");
        }
        if (m < l || m > u) {
            throw std::invalid_argument("scenario '" + name +
                                        "': resolved m must lie in [l, u]");
        }
        if (u == 0 || l == num_streams) {
            throw std::invalid_argument("scenario '" + name + "': degenerate [l, u]");
        }
    }
}

int resolved_signal_count(const ScenarioSpec& spec) {
    // round half to even, like the default FP rounding mode
    return static_cast<int>(std::nearbyint(spec.signal_fraction * spec.num_streams));
}

namespace {

std::int64_t scenario_cap(const ScenarioSpec& spec) {
    const KlInfo info = kl_info(StreamModel::gaussian_mean(spec.mu));
    return default_max_steps(spec.alpha, spec.beta, info.i1, info.i0);
}

TruthAssignment draw_truth(const ScenarioSpec& spec, int m, std::mt19937_64& rng) {
    // uniform size-m subset: partial Fisher-Yates over the index range
    std::vector<int> idx(static_cast<size_t>(spec.num_streams));
    for (int j = 0; j < spec.num_streams; ++j) idx[static_cast<size_t>(j)] = j;
    for (int i = 0; i < m; ++i) {
        const int pick = i + static_cast<int>(uniform_below(
                                 rng, static_cast<std::uint64_t>(spec.num_streams - i)));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick)]);
    }
    idx.resize(static_cast<size_t>(m));
    return TruthAssignment(spec.num_streams, std::move(idx));
}

int count_difference(const std::vector<int>& a, const std::vector<int>& b) {
    // |a \ b| for sorted vectors
    int count = 0;
    auto it = b.begin();
    for (int x : a) {
        while (it != b.end() && *it < x) ++it;
        if (it == b.end() || *it != x) ++count;
    }
    return count;
}

}  // namespace

RepRecord run_replication(const ScenarioSpec& spec, std::int64_t rep_index,
                          std::mt19937_64& rng, const TraceSink& trace) {
    const int m = resolved_signal_count(spec);
    const TruthAssignment truth = draw_truth(spec, m, rng);
    const WeightGenSpec gen{spec.eta, spec.r, spec.signal_fraction};
    const WeightVector weights = generate_weights(gen, truth, rng);

    const StreamModel model = StreamModel::gaussian_mean(spec.mu);
    const std::vector<StreamModel> models(static_cast<size_t>(spec.num_streams), model);
    const std::int64_t cap = scenario_cap(spec);

    Decision decision;
    double threshold_c = 0.0;
    if (spec.procedure == Procedure::Gap) {
        const GapThreshold threshold = calibrate_gap(spec.alpha, m, weights);
        threshold_c = *threshold.c;
        const GapConfig cfg(m, threshold, weights);
        decision = run_gap(models, truth, cfg, rng, cap, trace);
    } else {
        const GIThresholds thresholds = calibrate_gi(spec.alpha, spec.beta, spec.l, spec.u, weights);
        threshold_c = thresholds.c ? *thresholds.c : std::nan("");
        const GIConfig cfg(spec.l, spec.u, thresholds, weights);
        decision = run_gi(models, truth, cfg, rng, cap, trace);
    }

    RepRecord record;
    record.rep = rep_index;
    record.stop_time = decision.stop_time;
    record.cap_hit = decision.fired_rule == FiredRule::TruncatedCap;
    record.n_false_pos = count_difference(decision.rejected, truth.signals());
    record.n_false_neg = count_difference(truth.signals(), decision.rejected);
    record.threshold_c = threshold_c;
    return record;
}

std::vector<RepRecord> collect_records(const ScenarioSpec& spec, int workers) {
    spec.validate();
    const std::int64_t reps = spec.reps;
    std::vector<RepRecord> records(static_cast<size_t>(reps));
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers < 1) workers = 1;
    }
    workers = static_cast<int>(std::min<std::int64_t>(workers, reps));

    auto run_slice = [&](int worker_index) {
        for (std::int64_t rep = worker_index; rep < reps; rep += workers) {
            std::mt19937_64 rng = make_substream(spec.master_seed, static_cast<std::uint64_t>(rep));
            records[static_cast<size_t>(rep)] = run_replication(spec, rep, rng);
        }
    };

    if (workers == 1) {
        run_slice(0);
        return records;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                run_slice(w);
            } catch (...) {
                std::lock_guard<std::mutex> hold(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return records;
}

double optimality_ratio(const ScenarioResult& result, const ScenarioSpec& spec,
                        const WorstCaseRates& rates) {
    double floor = 0.0;
    if (spec.procedure == Procedure::Gap) {
        if (!rates.eta1 || !rates.eta0) {
            throw std::domain_error("optimality_ratio: gap needs both information rates");
        }
        floor = lower_bound_gap(spec.alpha, *rates.eta1, *rates.eta0);
    } else {
        floor = lower_bound_gi(spec.alpha, spec.beta, result.m, spec.l, spec.u,
                               rates.eta1, rates.eta0);
    }
    if (!(floor > 0.0)) {
        throw std::domain_error("optimality_ratio: expected-sample-size floor is zero");
    }
    return result.ess / floor;
}

ScenarioResult aggregate(const ScenarioSpec& spec, std::span<const RepRecord> records) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");
    const std::int64_t reps = static_cast<std::int64_t>(records.size());

    // integer accumulators: exact, so the reduction is order-independent
    std::int64_t time_sum = 0;
    std::int64_t time_sq_sum = 0;
    std::int64_t err1 = 0, err2 = 0, caps = 0;
    for (const RepRecord& rec : records) {
        time_sum += rec.stop_time;
        time_sq_sum += rec.stop_time * rec.stop_time;
        caps += rec.cap_hit ? 1 : 0;
        if (spec.procedure == Procedure::Gap) {
            // with |D| forced to m, any false positive pairs with a false
            // negative; the error event is decision != truth
            const bool wrong = rec.n_false_pos > 0 || rec.n_false_neg > 0;
            err1 += wrong ? 1 : 0;
            err2 += wrong ? 1 : 0;
        } else {
            err1 += rec.n_false_pos > 0 ? 1 : 0;
            err2 += rec.n_false_neg > 0 ? 1 : 0;
        }
    }

    ScenarioResult result;
    result.scenario = spec.name;
    result.num_streams = spec.num_streams;
    result.m = resolved_signal_count(spec);
    result.alpha = spec.alpha;
    result.beta = spec.beta;
    result.eta = spec.eta;
    result.r = spec.r;
    result.reps = reps;
    result.ess = static_cast<double>(time_sum) / static_cast<double>(reps);
    if (reps > 1) {
        const double mean = result.ess;
        const double var = (static_cast<double>(time_sq_sum) -
                            static_cast<double>(reps) * mean * mean) /
                           static_cast<double>(reps - 1);
        result.ess_se = std::sqrt(std::max(var, 0.0) / static_cast<double>(reps));
    }
    auto proportion = [reps](std::int64_t count) {
        return static_cast<double>(count) / static_cast<double>(reps);
    };
    auto binom_se = [reps](double p) {
        return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
    };
    result.fwe1 = proportion(err1);
    result.fwe1_se = binom_se(result.fwe1);
    result.fwe2 = proportion(err2);
    result.fwe2_se = binom_se(result.fwe2);
    result.cap_rate = proportion(caps);

    const KlInfo info = kl_info(StreamModel::gaussian_mean(spec.mu));
    result.optimality_ratio =
        optimality_ratio(result, spec, WorstCaseRates{info.i1, info.i0});
    return result;
}

ScenarioResult run_scenario(const ScenarioSpec& spec, int workers) {
    return aggregate(spec, collect_records(spec, workers));
}

std::vector<ScenarioResult> run_sweep(std::span<const ScenarioSpec> specs, int workers,
                                      std::vector<std::string>* errors) {
    std::set<std::string> names;
    for (const ScenarioSpec& spec : specs) {
        spec.validate();
        if (!names.insert(spec.name).second) {
            throw std::invalid_argument("run_sweep: duplicate scenario name '" + spec.name + "'");
        }
    }
    std::vector<ScenarioResult> results;
    results.reserve(specs.size());
    for (const ScenarioSpec& spec : specs) {
        try {
            results.push_back(run_scenario(spec, workers));
        } catch (const std::exception& e) {
            if (errors) {
                errors->push_back(spec.name + ": " + e.what());
            } else {
                throw;
            }
        }
    }
    return results;
}

std::vector<ScenarioSpec> weighting_study_specs(bool full_scale, std::uint64_t seed) {
    struct Regime {
        const char* name;
        double eta;
        double r;
    };
    constexpr Regime regimes[] = {
        {"unweighted", 1.0, 1.0},
        {"informative", 20.0, 5.0},
        {"misinformative", 0.05, 5.0},
        {"noisy", 1.0, 5.0},
    };
    const std::vector<int> grid =
        full_scale ? std::vector<int>{200, 250, 300, 350, 400} : std::vector<int>{100, 200};
    const std::int64_t reps = full_scale ? 10000 : 2000;

    std::vector<ScenarioSpec> specs;
    for (const Regime& regime : regimes) {
        for (int j_count : grid) {
            ScenarioSpec spec;
            char name[64];
            std::snprintf(name, sizeof name, "%s_J%d", regime.name, j_count);
            spec.name = name;
            spec.num_streams = j_count;
            spec.signal_fraction = 0.1;
            spec.mu = 0.15;
            spec.alpha = 0.05;
            spec.beta = 0.05;
            spec.eta = regime.eta;
            spec.r = regime.r;
            spec.procedure = Procedure::Gap;
            spec.reps = reps;
            // Regimes at the same J share a master seed: replication i then
            // sees the same signal set, guess draws and sample path in every
            // regime, so cross-regime ESS comparisons are paired (common
            // random numbers). Different J get distinct streams.
            spec.master_seed = derive_subseed(seed, static_cast<std::uint64_t>(j_count));
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void write_records_csv(std::ostream& out, const ScenarioSpec& spec,
                       std::span<const RepRecord> records) {
    out << "scenario,J,m,alpha,beta,eta,r,rep,T,cap_hit,n_false_pos,n_false_neg,threshold_c\n";
    const int m = resolved_signal_count(spec);
    for (const RepRecord& rec : records) {
        out << spec.name << ',' << spec.num_streams << ',' << m << ','
            << fmt_double(spec.alpha) << ',' << fmt_double(spec.beta) << ','
            << fmt_double(spec.eta) << ',' << fmt_double(spec.r) << ',' << rec.rep << ','
            << rec.stop_time << ',' << (rec.cap_hit ? 1 : 0) << ',' << rec.n_false_pos
            << ',' << rec.n_false_neg << ',' << fmt_double(rec.threshold_c) << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const ScenarioResult> results) {
    out << "scenario,J,m,alpha,beta,eta,r,reps,ess,ess_se,fwe1,fwe1_se,fwe2,fwe2_se,"
           "cap_rate,optimality_ratio\n";
    for (const ScenarioResult& r : results) {
        out << r.scenario << ',' << r.num_streams << ',' << r.m << ','
            << fmt_double(r.alpha) << ',' << fmt_double(r.beta) << ',' << fmt_double(r.eta)
            << ',' << fmt_double(r.r) << ',' << r.reps << ',' << fmt_double(r.ess) << ','
            << fmt_double(r.ess_se) << ',' << fmt_double(r.fwe1) << ','
            << fmt_double(r.fwe1_se) << ',' << fmt_double(r.fwe2) << ','
            << fmt_double(r.fwe2_se) << ',' << fmt_double(r.cap_rate) << ','
            << fmt_double(r.optimality_ratio) << '\n';
    }
}

void write_manifest(std::ostream& out, std::span<const ScenarioSpec> specs,
                    bool validation_stamp_present) {
    out << "format=seqweight-manifest-v1\n";
    out << "version=" << kVersion << '\n';
    out << "seed_derivation=" << kSeedDerivationId << '\n';
    out << "validation_stamp=" << (validation_stamp_present ? "present" : "absent") << '\n';
    out << "scenarios=" << specs.size() << '\n';
    for (const ScenarioSpec& spec : specs) {
        const std::string prefix = "scenario." + spec.name + ".";
        out << prefix << "J=" << spec.num_streams << '\n';
        out << prefix << "signal_fraction=" << fmt_double(spec.signal_fraction) << '\n';
        out << prefix << "mu=" << fmt_double(spec.mu) << '\n';
        out << prefix << "alpha=" << fmt_double(spec.alpha) << '\n';
        out << prefix << "beta=" << fmt_double(spec.beta) << '\n';
        out << prefix << "eta=" << fmt_double(spec.eta) << '\n';
        out << prefix << "r=" << fmt_double(spec.r) << '\n';
        out << prefix << "procedure="
            << (spec.procedure == Procedure::Gap ? "gap" : "gi") << '\n';
        if (spec.procedure == Procedure::GapIntersection) {
            out << prefix << "l=" << spec.l << '\n';
            out << prefix << "u=" << spec.u << '\n';
        }
        out << prefix << "reps=" << spec.reps << '\n';
        out << prefix << "seed=" << spec.master_seed << '\n';
    }
}

}  // namespace seqweight
