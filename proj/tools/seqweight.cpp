// seqweight: weighted sequential multiple testing from the command line.
//
// Subcommands: calibrate, gap, gi, sweep, validate. Exit codes: 0 success,
// 1 validation failure, 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seqweight/config.hpp"
#include "seqweight/montecarlo.hpp"
#include "seqweight/oracle.hpp"
#include "seqweight/rng.hpp"
#include "seqweight/thresholds.hpp"
#include "seqweight/version.hpp"

namespace fs = std::filesystem;
using namespace seqweight;

namespace {

constexpr const char* kStampFile = "validation_stamp.txt";

std::string default_out_dir() {
    if (const char* env = std::getenv("SEQWEIGHT_OUT"); env && *env) return env;
    return ".";
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

bool stamp_present(const fs::path& out_dir) { return fs::exists(out_dir / kStampFile); }

void warn_if_unvalidated(const fs::path& out_dir) {
    if (!stamp_present(out_dir)) {
        std::cerr << "warning: no " << kStampFile << " in " << out_dir.string()
                  << "; run `seqweight validate --out " << out_dir.string()
                  << "` before trusting results\n";
    }
}

WeightVector parse_weights(const std::string& spec, int j_count) {
    if (spec == "ones") return WeightVector::ones(j_count);
    std::vector<double> values;
    if (!spec.empty() && spec.front() == '@') {
        // one weight per line, optionally "stream_index,weight" rows
        std::ifstream in(spec.substr(1));
        if (!in) throw CLI::ValidationError("--weights", "cannot open " + spec.substr(1));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line == "stream_index,weight") continue;
            const size_t comma = line.find(',');
            values.push_back(std::stod(comma == std::string::npos ? line
                                                                  : line.substr(comma + 1)));
        }
    } else {
        std::stringstream stream(spec);
        std::string token;
        while (std::getline(stream, token, ',')) values.push_back(std::stod(token));
    }
    if (static_cast<int>(values.size()) != j_count) {
        throw CLI::ValidationError("--weights", "expected " + std::to_string(j_count) +
                                                    " weights, got " +
                                                    std::to_string(values.size()));
    }
    return WeightVector(std::move(values));
}

void print_result(const ScenarioResult& result) {
    std::printf("scenario %s: J=%d m=%d reps=%lld\n", result.scenario.c_str(),
                result.num_streams, result.m, static_cast<long long>(result.reps));
    std::printf("  ess               %.2f (se %.2f)\n", result.ess, result.ess_se);
    std::printf("  fwe type I        %.4f (se %.4f)\n", result.fwe1, result.fwe1_se);
    std::printf("  fwe type II       %.4f (se %.4f)\n", result.fwe2, result.fwe2_se);
    std::printf("  cap rate          %.4f\n", result.cap_rate);
    std::printf("  optimality ratio  %.3f\n", result.optimality_ratio);
}

struct RunFlags {
    std::string out_dir = default_out_dir();
    std::uint64_t seed = 0;
    std::int64_t reps = 2000;
    int workers = 0;
    bool records = false;
    std::string trace_path;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--out", flags.out_dir, "output directory (or $SEQWEIGHT_OUT)")
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed, "master seed; all randomness derives from it")
        ->capture_default_str();
    cmd->add_option("--reps", flags.reps, "Monte Carlo replications")->capture_default_str();
    cmd->add_option("--workers", flags.workers, "worker threads (0 = hardware)")
        ->capture_default_str();
    cmd->add_flag("--records", flags.records, "also write the per-replication csv");
    cmd->add_option("--trace", flags.trace_path,
                    "write an (n,stream,llr,wllr) trace of replication 0 to this file");
}

int run_single(const ScenarioSpec& spec, const RunFlags& flags) {
    spec.validate();
    const fs::path out_dir(flags.out_dir);
    warn_if_unvalidated(out_dir);

    if (!flags.trace_path.empty()) {
        std::ostringstream trace;
        trace << "n,stream,llr,wllr\n";
        std::mt19937_64 rng = make_substream(spec.master_seed, 0);
        char row[128];
        run_replication(spec, 0, rng,
                        [&](std::int64_t n, int stream, double llr, double wllr_value) {
                            std::snprintf(row, sizeof row, "%lld,%d,%.10g,%.10g\n",
                                          static_cast<long long>(n), stream, llr,
                                          wllr_value);
                            trace << row;
                        });
        write_file(flags.trace_path, trace.str());
    }

    const auto records = collect_records(spec, flags.workers);
    const ScenarioResult result = aggregate(spec, records);
    print_result(result);

    std::ostringstream summary;
    write_summary_csv(summary, std::vector<ScenarioResult>{result});
    write_file(out_dir / (spec.name + "_summary.csv"), summary.str());
    if (flags.records) {
        std::ostringstream rows;
        write_records_csv(rows, spec, records);
        write_file(out_dir / (spec.name + "_records.csv"), rows.str());
    }
    std::ostringstream manifest;
    write_manifest(manifest, std::vector<ScenarioSpec>{spec}, stamp_present(out_dir));
    write_file(out_dir / (spec.name + "_manifest.txt"), manifest.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted sequential multiple testing procedures and their Monte Carlo "
                 "harness (seqweight " + std::string(kVersion) + ")"};
    app.require_subcommand(0, 1);

    // ---- calibrate ---------------------------------------------------------
    auto* calibrate = app.add_subcommand(
        "calibrate", "compute fwe-calibrated stopping thresholds for a weight vector");
    double cal_alpha = 0.05, cal_beta = 0.05;
    int cal_j = 0;
    std::optional<int> cal_m, cal_l, cal_u;
    std::string cal_weights = "ones", cal_out;
    calibrate->add_option("--alpha", cal_alpha, "type I fwe level")->capture_default_str();
    calibrate->add_option("--beta", cal_beta, "type II fwe level (interval mode)")
        ->capture_default_str();
    calibrate->add_option("--J", cal_j, "number of streams")->required();
    calibrate->add_option("--m", cal_m, "known signal count (gap mode)");
    calibrate->add_option("--l", cal_l, "lower signal-count bound (interval mode)");
    calibrate->add_option("--u", cal_u, "upper signal-count bound (interval mode)");
    calibrate->add_option("--weights", cal_weights,
                          "'ones', a comma list, or @file with one weight per line")
        ->capture_default_str();
    calibrate->add_option("--out", cal_out, "write calibration.csv and weights.csv here");

    // ---- gap / gi ----------------------------------------------------------
    auto* gap = app.add_subcommand("gap", "run a gap-procedure scenario");
    auto* gi = app.add_subcommand("gi", "run a gap-intersection scenario");
    RunFlags gap_flags, gi_flags;
    ScenarioSpec gap_spec, gi_spec;
    gap_spec.name = "gap";
    gi_spec.name = "gi";
    gi_spec.procedure = Procedure::GapIntersection;
    for (auto [cmd, spec, flags] : {std::tuple{gap, &gap_spec, &gap_flags},
                                    std::tuple{gi, &gi_spec, &gi_flags}}) {
        cmd->add_option("--name", spec->name, "scenario name used in output files")
            ->capture_default_str();
        cmd->add_option("--J", spec->num_streams, "number of streams")->required();
        cmd->add_option("--signal-fraction", spec->signal_fraction,
                        "fraction of streams carrying signal")
            ->capture_default_str();
        cmd->add_option("--mu", spec->mu, "alternative mean of the unit-variance streams")
            ->capture_default_str();
        cmd->add_option("--alpha", spec->alpha, "type I fwe level")->capture_default_str();
        cmd->add_option("--eta", spec->eta, "weight informativeness (1 = uninformative)")
            ->capture_default_str();
        cmd->add_option("--r", spec->r, "weight strength (1 = unweighted)")
            ->capture_default_str();
        add_run_flags(cmd, *flags);
    }
    gi->add_option("--beta", gi_spec.beta, "type II fwe level")->capture_default_str();
    gi->add_option("--l", gi_spec.l, "lower signal-count bound")->required();
    gi->add_option("--u", gi_spec.u, "upper signal-count bound")->required();

    // ---- sweep -------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "run a scenario sweep and emit plot data");
    RunFlags sweep_flags;
    bool paper_figure = false, full_scale = false;
    std::string config_path;
    sweep->add_flag("--paper-figure", paper_figure,
                    "the four weighting regimes crossed with the J grid");
    sweep->add_flag("--full-scale", full_scale,
                    "10000 reps and J in {200..400} (default is desk scale: 2000 reps, "
                    "J in {100,200})");
    sweep->add_option("--config", config_path, "scenario file ([name] sections, key=value)");
    add_run_flags(sweep, sweep_flags);

    // ---- validate ----------------------------------------------------------
    auto* validate = app.add_subcommand(
        "validate", "run the brute-force oracle suites; exit 1 on any mismatch");
    std::string validate_out = default_out_dir();
    std::uint64_t validate_seed = 0;
    int validate_trials = 200;
    validate->add_option("--out", validate_out, "directory for the validation stamp")
        ->capture_default_str();
    validate->add_option("--seed", validate_seed, "seed for the randomized checks")
        ->capture_default_str();
    validate->add_option("--trials", validate_trials, "random vectors per suite")
        ->capture_default_str();

    if (argc <= 1) {
        std::cout << app.help() << std::flush;
        return 0;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (calibrate->parsed()) {
            const WeightVector weights = parse_weights(cal_weights, cal_j);
            std::string csv;
            if (cal_m) {
                if (cal_l || cal_u) {
                    throw CLI::ValidationError("calibrate", "--m excludes --l/--u");
                }
                const GapThreshold th = calibrate_gap(cal_alpha, *cal_m, weights);
                std::printf("c = %.6f\n", *th.c);
                csv = calibration_csv(th, weights);
            } else if (cal_l && cal_u) {
                const GIThresholds th = calibrate_gi(cal_alpha, cal_beta, *cal_l, *cal_u, weights);
                std::printf("a = %.6f\nb = %.6f\n", th.a, th.b);
                std::printf("c = %s\n", th.c ? std::to_string(*th.c).c_str() : "inactive");
                std::printf("d = %s\n", th.d ? std::to_string(*th.d).c_str() : "inactive");
                csv = calibration_csv(th, weights);
            } else {
                throw CLI::ValidationError("calibrate", "need --m, or both --l and --u");
            }
            if (!cal_out.empty()) {
                write_file(fs::path(cal_out) / "calibration.csv", csv);
                write_file(fs::path(cal_out) / "weights.csv", weights_csv(weights));
            }
            return 0;
        }

        if (gap->parsed()) {
            gap_spec.reps = gap_flags.reps;
            gap_spec.master_seed = gap_flags.seed;
            return run_single(gap_spec, gap_flags);
        }
        if (gi->parsed()) {
            gi_spec.reps = gi_flags.reps;
            gi_spec.master_seed = gi_flags.seed;
            return run_single(gi_spec, gi_flags);
        }

        if (sweep->parsed()) {
            std::vector<ScenarioSpec> specs;
            if (paper_figure != config_path.empty()) {
                throw CLI::ValidationError("sweep", "need exactly one of --paper-figure or "
                                                    "--config");
            }
            if (paper_figure) {
                specs = weighting_study_specs(full_scale, sweep_flags.seed);
                if (sweep_flags.reps != 2000) {
                    for (ScenarioSpec& spec : specs) spec.reps = sweep_flags.reps;
                }
            } else {
                const ConfigLoad load = load_config_file(config_path, sweep_flags.seed);
                for (const std::string& note : load.notes) {
                    std::cerr << "note: " << note << '\n';
                }
                specs = load.specs;
            }
            const fs::path out_dir(sweep_flags.out_dir);
            warn_if_unvalidated(out_dir);

            std::vector<std::string> errors;
            const auto results = run_sweep(specs, sweep_flags.workers, &errors);
            for (const std::string& error : errors) {
                std::cerr << "scenario failed: " << error << '\n';
            }
            for (const ScenarioResult& result : results) {
                std::printf("%-24s J=%-4d ess=%-9.2f fwe1=%.4f fwe2=%.4f ratio=%.3f\n",
                            result.scenario.c_str(), result.num_streams, result.ess,
                            result.fwe1, result.fwe2, result.optimality_ratio);
            }

            std::ostringstream summary;
            write_summary_csv(summary, results);
            write_file(out_dir / "sweep_summary.csv", summary.str());
            std::ostringstream plot;
            emit_plot_data(results, plot);
            write_file(out_dir / "sweep_plot.csv", plot.str());
            std::ostringstream manifest;
            write_manifest(manifest, specs, stamp_present(out_dir));
            write_file(out_dir / "sweep_manifest.txt", manifest.str());
            if (sweep_flags.records) {
                for (const ScenarioSpec& spec : specs) {
                    const auto records = collect_records(spec, sweep_flags.workers);
                    std::ostringstream rows;
                    write_records_csv(rows, spec, records);
                    write_file(out_dir / (spec.name + "_records.csv"), rows.str());
                }
            }
            return errors.empty() ? 0 : 1;
        }

        if (validate->parsed()) {
            std::mt19937_64 rng(derive_subseed(validate_seed, 0));
            const OracleReport price = verify_price_closed_form(10, validate_trials, rng);
            const OracleReport maxima = verify_gi_maxima(10, validate_trials, rng);
            const OracleReport steps = verify_gap_step_agreement(50, 50 * validate_trials, rng);
            std::printf("price closed form vs enumeration: %s", price.to_text().c_str());
            std::printf("interval maxima vs enumeration:   %s", maxima.to_text().c_str());
            std::printf("gap step vs reference:            %s", steps.to_text().c_str());
            const bool ok = price.passed() && maxima.passed() && steps.passed();
            if (ok) {
                std::ostringstream stamp;
                stamp << "seqweight validation stamp\nversion=" << kVersion
                      << "\nchecks=" << (price.checked + maxima.checked + steps.checked)
                      << "\nmismatches=0\n";
                write_file(fs::path(validate_out) / kStampFile, stamp.str());
                std::printf("validation ok; stamp written to %s/%s\n", validate_out.c_str(),
                            kStampFile);
            } else {
                std::printf("validation FAILED\n");
            }
            return ok ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout << app.help() << std::flush;
    return 0;
}
