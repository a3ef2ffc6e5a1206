#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "seqweight/config.hpp"
#include "seqweight/montecarlo.hpp"
#include "seqweight/oracle.hpp"
#include "seqweight/procedures.hpp"
#include "seqweight/rng.hpp"
#include "seqweight/thresholds.hpp"
#include "seqweight/version.hpp"

namespace py = pybind11;
using namespace seqweight;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted sequential multiple testing: gap and gap-intersection "
              "procedures, fwe-calibrated thresholds, and the Monte Carlo harness.";

    py::class_<std::mt19937_64>(m, "Rng", "mt19937-64 random engine")
        .def(py::init<std::uint64_t>(), py::arg("seed"));
    m.def("make_substream", &make_substream, py::arg("master_seed"), py::arg("counter"),
          "derive the engine used for one replication");
    m.def("derive_subseed", &derive_subseed, py::arg("master_seed"), py::arg("counter"));

    // ---- model -------------------------------------------------------------
    py::enum_<ModelKind>(m, "ModelKind").value("GaussianMean", ModelKind::GaussianMean);
    py::class_<StreamModel>(m, "StreamModel")
        .def_static("gaussian_mean", &StreamModel::gaussian_mean, py::arg("mu1"))
        .def_readonly("kind", &StreamModel::kind)
        .def_readonly("mu1", &StreamModel::mu1);
    py::class_<TruthAssignment>(m, "TruthAssignment")
        .def(py::init<int, std::vector<int>>(), py::arg("num_streams"),
             py::arg("signal_indices"))
        .def_property_readonly("num_streams", &TruthAssignment::num_streams)
        .def_property_readonly("signal_count", &TruthAssignment::signal_count)
        .def("is_signal", &TruthAssignment::is_signal, py::arg("stream"))
        .def_property_readonly("signals", &TruthAssignment::signals);
    py::class_<TrialState>(m, "TrialState")
        .def(py::init<int>(), py::arg("num_streams"))
        .def_readwrite("n", &TrialState::n)
        .def_readwrite("llr", &TrialState::llr);
    py::class_<KlInfo>(m, "KlInfo")
        .def_readonly("i0", &KlInfo::i0)
        .def_readonly("i1", &KlInfo::i1);
    py::class_<WorstCaseRates>(m, "WorstCaseRates")
        .def_readonly("eta1", &WorstCaseRates::eta1)
        .def_readonly("eta0", &WorstCaseRates::eta0);

    m.def("llr_increment", &llr_increment, py::arg("x"), py::arg("model"));
    m.def("kl_info", &kl_info, py::arg("model"));
    m.def("sample_increment", &sample_increment, py::arg("rng"), py::arg("model"),
          py::arg("is_signal"));
    m.def(
        "worst_case_rates",
        [](const std::vector<StreamModel>& models, const TruthAssignment& truth) {
            return worst_case_rates(models, truth);
        },
        py::arg("models"), py::arg("truth"));

    // ---- weights -----------------------------------------------------------
    py::class_<WeightVector>(m, "WeightVector")
        .def(py::init<std::vector<double>>(), py::arg("values"))
        .def_static("ones", &WeightVector::ones, py::arg("num_streams"))
        .def_property_readonly("values", &WeightVector::values)
        .def_property_readonly("ascending", &WeightVector::ascending)
        .def("log_values", &WeightVector::log_values)
        .def("__len__", &WeightVector::size)
        .def("__getitem__", [](const WeightVector& w, int j) {
            if (j < 0 || j >= w.size()) throw py::index_error();
            return w[j];
        });
    py::class_<WeightGenSpec>(m, "WeightGenSpec")
        .def(py::init([](double eta, double r, double signal_fraction) {
                 WeightGenSpec spec{eta, r, signal_fraction};
                 spec.validate();
                 return spec;
             }),
             py::arg("eta"), py::arg("r"), py::arg("signal_fraction"))
        .def_readonly("eta", &WeightGenSpec::eta)
        .def_readonly("r", &WeightGenSpec::r)
        .def_readonly("signal_fraction", &WeightGenSpec::signal_fraction);
    py::class_<GuessProbabilities>(m, "GuessProbabilities")
        .def_readonly("p1", &GuessProbabilities::p1)
        .def_readonly("p0", &GuessProbabilities::p0);

    m.def("wllr", &wllr, py::arg("llr"), py::arg("weight"));
    m.def("price_of_weighting", &price_of_weighting, py::arg("m"), py::arg("weights"));
    m.def("price_of_weighting_bruteforce", &price_of_weighting_bruteforce, py::arg("m"),
          py::arg("weights"));
    m.def("max_complement_weight_sum", &max_complement_weight_sum, py::arg("l"),
          py::arg("weights"));
    m.def("max_reciprocal_weight_sum", &max_reciprocal_weight_sum, py::arg("u"),
          py::arg("weights"));
    m.def("guess_probabilities", &guess_probabilities, py::arg("spec"));
    m.def("generate_weights", &generate_weights, py::arg("spec"), py::arg("truth"),
          py::arg("rng"));
    m.def("weights_csv", &weights_csv, py::arg("weights"));

    // ---- thresholds ----------------------------------------------------------
    py::class_<GapThreshold>(m, "GapThreshold")
        .def_readonly("c", &GapThreshold::c)
        .def_readonly("alpha", &GapThreshold::alpha)
        .def_readonly("m", &GapThreshold::m)
        .def("active", &GapThreshold::active);
    py::class_<GIThresholds>(m, "GIThresholds")
        .def_readonly("a", &GIThresholds::a)
        .def_readonly("b", &GIThresholds::b)
        .def_readonly("c", &GIThresholds::c)
        .def_readonly("d", &GIThresholds::d)
        .def_readonly("alpha", &GIThresholds::alpha)
        .def_readonly("beta", &GIThresholds::beta)
        .def_readonly("l", &GIThresholds::l)
        .def_readonly("u", &GIThresholds::u);
    py::class_<FweBounds>(m, "FweBounds")
        .def_readonly("type1", &FweBounds::type1)
        .def_readonly("type2", &FweBounds::type2);

    m.def("calibrate_gap", &calibrate_gap, py::arg("alpha"), py::arg("m"),
          py::arg("weights"));
    m.def("calibrate_gi", &calibrate_gi, py::arg("alpha"), py::arg("beta"), py::arg("l"),
          py::arg("u"), py::arg("weights"));
    m.def("fwe_bound_gap", &fwe_bound_gap, py::arg("c"), py::arg("truth"),
          py::arg("weights"));
    m.def("fwe_bounds_gi", &fwe_bounds_gi, py::arg("thresholds"), py::arg("truth"),
          py::arg("weights"));

    // ---- procedures ----------------------------------------------------------
    py::enum_<FiredRule>(m, "FiredRule")
        .value("Gap", FiredRule::Gap)
        .value("Tau1", FiredRule::Tau1)
        .value("Tau2", FiredRule::Tau2)
        .value("Tau3", FiredRule::Tau3)
        .value("TruncatedCap", FiredRule::TruncatedCap);
    py::class_<Decision>(m, "Decision")
        .def_readonly("stop_time", &Decision::stop_time)
        .def_readonly("rejected", &Decision::rejected)
        .def_readonly("fired_rule", &Decision::fired_rule)
        .def("__repr__", [](const Decision& d) {
            std::ostringstream out;
            out << "Decision(stop_time=" << d.stop_time << ", rejected={";
            for (size_t i = 0; i < d.rejected.size(); ++i) {
                out << (i ? "," : "") << d.rejected[i];
            }
            out << "}, fired_rule=" << fired_rule_name(d.fired_rule) << ")";
            return out.str();
        });
    py::class_<GapConfig>(m, "GapConfig")
        .def(py::init<int, GapThreshold, WeightVector>(), py::arg("m"),
             py::arg("threshold"), py::arg("weights"))
        .def_readonly("m", &GapConfig::m)
        .def_readonly("threshold", &GapConfig::threshold)
        .def_readonly("weights", &GapConfig::weights);
    py::class_<GIConfig>(m, "GIConfig")
        .def(py::init<int, int, GIThresholds, WeightVector>(), py::arg("l"), py::arg("u"),
             py::arg("thresholds"), py::arg("weights"))
        .def_readonly("l", &GIConfig::l)
        .def_readonly("u", &GIConfig::u)
        .def_readonly("thresholds", &GIConfig::thresholds)
        .def_readonly("weights", &GIConfig::weights);

    m.def("ordered_wllr", &ordered_wllr, py::arg("state"), py::arg("weights"));
    m.def("count_positive_wllr", &count_positive_wllr, py::arg("state"), py::arg("weights"));
    m.def("gap_step", &gap_step, py::arg("state"), py::arg("config"));
    m.def("gi_step", &gi_step, py::arg("state"), py::arg("config"));
    m.def(
        "run_gap",
        [](const std::vector<StreamModel>& models, const TruthAssignment& truth,
           const GapConfig& cfg, std::mt19937_64& rng, std::int64_t max_steps) {
            return run_gap(models, truth, cfg, rng, max_steps);
        },
        py::arg("models"), py::arg("truth"), py::arg("config"), py::arg("rng"),
        py::arg("max_steps"));
    m.def(
        "conservative_gap_time",
        [](const std::vector<StreamModel>& models, const TruthAssignment& truth,
           const GapConfig& cfg, std::mt19937_64& rng, std::int64_t max_steps) {
            return conservative_gap_time(models, truth, cfg, rng, max_steps);
        },
        py::arg("models"), py::arg("truth"), py::arg("config"), py::arg("rng"),
        py::arg("max_steps"));
    m.def(
        "run_gi",
        [](const std::vector<StreamModel>& models, const TruthAssignment& truth,
           const GIConfig& cfg, std::mt19937_64& rng, std::int64_t max_steps) {
            return run_gi(models, truth, cfg, rng, max_steps);
        },
        py::arg("models"), py::arg("truth"), py::arg("config"), py::arg("rng"),
        py::arg("max_steps"));
    m.def("lower_bound_gap", &lower_bound_gap, py::arg("alpha"), py::arg("eta1"),
          py::arg("eta0"));
    m.def("lower_bound_gi", &lower_bound_gi, py::arg("alpha"), py::arg("beta"),
          py::arg("size_a"), py::arg("l"), py::arg("u"), py::arg("eta1"), py::arg("eta0"));
    m.def("default_max_steps", &default_max_steps, py::arg("alpha"), py::arg("beta"),
          py::arg("eta1"), py::arg("eta0"));

    // ---- oracle ----------------------------------------------------------
    py::class_<OracleMismatch>(m, "OracleMismatch")
        .def_readonly("input", &OracleMismatch::input)
        .def_readonly("expected", &OracleMismatch::expected)
        .def_readonly("got", &OracleMismatch::got);
    py::class_<OracleReport>(m, "OracleReport")
        .def_readonly("checked", &OracleReport::checked)
        .def_readonly("mismatches", &OracleReport::mismatches)
        .def("passed", &OracleReport::passed)
        .def("to_text", &OracleReport::to_text)
        .def("to_csv", &OracleReport::to_csv);
    m.def("verify_price_closed_form", &verify_price_closed_form, py::arg("j_max"),
          py::arg("trials"), py::arg("rng"));
    m.def("verify_gi_maxima", &verify_gi_maxima, py::arg("j_max"), py::arg("trials"),
          py::arg("rng"));
    m.def("reference_gap_step", &reference_gap_step, py::arg("state"), py::arg("config"));
    m.def("verify_gap_step_agreement", &verify_gap_step_agreement, py::arg("j_max"),
          py::arg("trials"), py::arg("rng"));

    // ---- montecarlo ----------------------------------------------------------
    py::enum_<Procedure>(m, "Procedure")
        .value("Gap", Procedure::Gap)
        .value("GapIntersection", Procedure::GapIntersection);
    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def(py::init([](std::string name, int num_streams, double signal_fraction,
                         double mu, double alpha, double beta, double eta, double r,
                         Procedure procedure, int l, int u, std::int64_t reps,
                         std::uint64_t master_seed) {
                 ScenarioSpec spec{std::move(name), num_streams, signal_fraction, mu,
                                   alpha,           beta,        eta,             r,
                                   procedure,       l,           u,               reps,
                                   master_seed};
                 spec.validate();
                 return spec;
             }),
             py::arg("name"), py::arg("num_streams"), py::arg("signal_fraction") = 0.1,
             py::arg("mu") = 0.15, py::arg("alpha") = 0.05, py::arg("beta") = 0.05,
             py::arg("eta") = 1.0, py::arg("r") = 1.0,
             py::arg("procedure") = Procedure::Gap, py::arg("l") = 0, py::arg("u") = 0,
             py::arg("reps") = 2000, py::arg("master_seed") = 0)
        .def_readonly("name", &ScenarioSpec::name)
        .def_readonly("num_streams", &ScenarioSpec::num_streams)
        .def_readonly("signal_fraction", &ScenarioSpec::signal_fraction)
        .def_readonly("mu", &ScenarioSpec::mu)
        .def_readonly("alpha", &ScenarioSpec::alpha)
        .def_readonly("beta", &ScenarioSpec::beta)
        .def_readonly("eta", &ScenarioSpec::eta)
        .def_readonly("r", &ScenarioSpec::r)
        .def_readonly("procedure", &ScenarioSpec::procedure)
        .def_readonly("l", &ScenarioSpec::l)
        .def_readonly("u", &ScenarioSpec::u)
        .def_readonly("reps", &ScenarioSpec::reps)
        .def_readonly("master_seed", &ScenarioSpec::master_seed);
    py::class_<RepRecord>(m, "RepRecord")
        .def_readonly("rep", &RepRecord::rep)
        .def_readonly("stop_time", &RepRecord::stop_time)
        .def_readonly("cap_hit", &RepRecord::cap_hit)
        .def_readonly("n_false_pos", &RepRecord::n_false_pos)
        .def_readonly("n_false_neg", &RepRecord::n_false_neg)
        .def_readonly("threshold_c", &RepRecord::threshold_c);
    py::class_<ScenarioResult>(m, "ScenarioResult")
        .def_readonly("scenario", &ScenarioResult::scenario)
        .def_readonly("num_streams", &ScenarioResult::num_streams)
        .def_readonly("m", &ScenarioResult::m)
        .def_readonly("alpha", &ScenarioResult::alpha)
        .def_readonly("beta", &ScenarioResult::beta)
        .def_readonly("eta", &ScenarioResult::eta)
        .def_readonly("r", &ScenarioResult::r)
        .def_readonly("reps", &ScenarioResult::reps)
        .def_readonly("ess", &ScenarioResult::ess)
        .def_readonly("ess_se", &ScenarioResult::ess_se)
        .def_readonly("fwe1", &ScenarioResult::fwe1)
        .def_readonly("fwe1_se", &ScenarioResult::fwe1_se)
        .def_readonly("fwe2", &ScenarioResult::fwe2)
        .def_readonly("fwe2_se", &ScenarioResult::fwe2_se)
        .def_readonly("cap_rate", &ScenarioResult::cap_rate)
        .def_readonly("optimality_ratio", &ScenarioResult::optimality_ratio);

    m.def("resolved_signal_count", &resolved_signal_count, py::arg("spec"));
    m.def("run_replication",
          [](const ScenarioSpec& spec, std::int64_t rep, std::mt19937_64& rng) {
              return run_replication(spec, rep, rng);
          },
          py::arg("spec"), py::arg("rep_index"), py::arg("rng"));
    m.def("collect_records", &collect_records, py::arg("spec"), py::arg("workers") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "aggregate",
        [](const ScenarioSpec& spec, const std::vector<RepRecord>& records) {
            return aggregate(spec, records);
        },
        py::arg("spec"), py::arg("records"));
    m.def("run_scenario", &run_scenario, py::arg("spec"), py::arg("workers") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_sweep",
        [](const std::vector<ScenarioSpec>& specs, int workers) {
            return run_sweep(specs, workers);
        },
        py::arg("specs"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());
    m.def("optimality_ratio", &optimality_ratio, py::arg("result"), py::arg("spec"),
          py::arg("rates"));
    m.def("weighting_study_specs", &weighting_study_specs, py::arg("full_scale"),
          py::arg("seed"));
    m.def(
        "summary_csv",
        [](const std::vector<ScenarioResult>& results) {
            std::ostringstream out;
            write_summary_csv(out, results);
            return out.str();
        },
        py::arg("results"));
    m.def(
        "records_csv",
        [](const ScenarioSpec& spec, const std::vector<RepRecord>& records) {
            std::ostringstream out;
            write_records_csv(out, spec, records);
            return out.str();
        },
        py::arg("spec"), py::arg("records"));

#ifdef SEQWEIGHT_VERSION_INFO
    m.attr("__version__") = SEQWEIGHT_VERSION_INFO;
#else
    m.attr("__version__") = kVersion;
#endif
}
