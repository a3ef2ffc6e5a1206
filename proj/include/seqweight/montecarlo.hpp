#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "seqweight/model.hpp"
#include "seqweight/procedures.hpp"

namespace seqweight {

enum class Procedure { Gap, GapIntersection };

/// Full description of one Monte Carlo experiment. A scenario is a pure
/// function of this struct: master_seed fixes every draw, and the per-
/// replication streams are derived from (master_seed, rep) so results do not
/// depend on worker count or scheduling.
struct ScenarioSpec {
    std::string name;
    int num_streams = 0;           ///< J
    double signal_fraction = 0.1;  ///< |A| = round(signal_fraction * J), ties to even
    double mu = 0.15;
    double alpha = 0.05;
    double beta = 0.05;
    double eta = 1.0;
    double r = 1.0;
    Procedure procedure = Procedure::Gap;
    int l = 0;  ///< gap-intersection only
    int u = 0;  ///< gap-intersection only
    std::int64_t reps = 2000;
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// Signal count implied by the scenario's fraction (round half to even).
int resolved_signal_count(const ScenarioSpec& spec);

/// Outcome of a single replication.
struct RepRecord {
    std::int64_t rep = 0;
    std::int64_t stop_time = 0;
    bool cap_hit = false;
    int n_false_pos = 0;
    int n_false_neg = 0;
    /// Realized weight-adaptive gap threshold; for the gap-intersection
    /// procedure this is the tau1 gap threshold, NaN when inactive (l = 0).
    double threshold_c = 0.0;
};

struct ScenarioResult {
    std::string scenario;
    int num_streams = 0;
    int m = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    double r = 0.0;
    std::int64_t reps = 0;
    double ess = 0.0;
    double ess_se = 0.0;
    double fwe1 = 0.0;
    double fwe1_se = 0.0;
    double fwe2 = 0.0;
    double fwe2_se = 0.0;
    double cap_rate = 0.0;
    double optimality_ratio = 0.0;
};

/// One replication, a pure function of (spec, rep_index) given the derived
/// stream. Order of draws: signal set, guesses/weights, then observations;
/// thresholds are recalibrated from the realized weights before sampling.
/// The optional trace sink sees every observation of this replication.
RepRecord run_replication(const ScenarioSpec& spec, std::int64_t rep_index,
                          std::mt19937_64& rng, const TraceSink& trace = {});

/// All replications of a scenario. workers <= 0 picks a hardware default;
/// the records are identical for every worker count.
std::vector<RepRecord> collect_records(const ScenarioSpec& spec, int workers = 0);

/// Deterministic reduction of records (taken in rep order) to a result row.
ScenarioResult aggregate(const ScenarioSpec& spec, std::span<const RepRecord> records);

ScenarioResult run_scenario(const ScenarioSpec& spec, int workers = 0);

/// ESS divided by the matching expected-sample-size floor; trends toward 1
/// from above as the error levels shrink. Throws when the floor is zero.
double optimality_ratio(const ScenarioResult& result, const ScenarioSpec& spec,
                        const WorstCaseRates& rates);

/// Run each scenario in turn. Duplicate names are a configuration error.
/// A scenario that fails mid-run is reported into `errors` (when given) and
/// skipped; the remaining scenarios still run.
std::vector<ScenarioResult> run_sweep(std::span<const ScenarioSpec> specs, int workers = 0,
                                      std::vector<std::string>* errors = nullptr);

/// The four weighting regimes (unweighted, informative, misinformative,
/// noisy) crossed with a J grid. Desk scale: J in {100, 200}, 2000 reps.
/// Full scale: J in {200, 250, 300, 350, 400}, 10000 reps.
std::vector<ScenarioSpec> weighting_study_specs(bool full_scale, std::uint64_t seed);

/// Per-replication CSV:
/// scenario,J,m,alpha,beta,eta,r,rep,T,cap_hit,n_false_pos,n_false_neg,threshold_c
void write_records_csv(std::ostream& out, const ScenarioSpec& spec,
                       std::span<const RepRecord> records);

/// Summary CSV: scenario,J,m,alpha,beta,eta,r,reps,ess,ess_se,fwe1,fwe1_se,
/// fwe2,fwe2_se,cap_rate,optimality_ratio
void write_summary_csv(std::ostream& out, std::span<const ScenarioResult> results);

/// key=value run manifest: code version, seed-derivation identifier,
/// validation-stamp status, and every scenario field.
void write_manifest(std::ostream& out, std::span<const ScenarioSpec> specs,
                    bool validation_stamp_present);

}  // namespace seqweight
