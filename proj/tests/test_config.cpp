#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "seqweight/config.hpp"

using namespace seqweight;

namespace {

ConfigLoad parse(const std::string& text, std::uint64_t seed = 1) {
    std::istringstream in(text);
    return load_config(in, seed);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("a full scenario section parses") {
    const ConfigLoad load = parse(
        "# weighting study, gap flavor\n"
        "[base]\n"
        "J=40\n"
        "signal_fraction=0.1\n"
        "mu=0.5\n"
        "alpha=0.04\n"
        "eta=20\n"
        "r=5\n"
        "reps=50\n"
        "seed=9\n"
        "\n"
        "[interval]\n"
        "J=40\n"
        "procedure=gi\n"
        "l=2\n"
        "u=6\n"
        "reps=50\n");
    REQUIRE(load.specs.size() == 2);
    const ScenarioSpec& base = load.specs[0];
    CHECK(base.name == "base");
    CHECK(base.num_streams == 40);
    CHECK(base.alpha == 0.04);
    CHECK(base.eta == 20.0);
    CHECK(base.master_seed == 9);
    const ScenarioSpec& interval = load.specs[1];
    CHECK(interval.procedure == Procedure::GapIntersection);
    CHECK(interval.l == 2);
    CHECK(interval.u == 6);
    // defaults were applied and noted
    CHECK(interval.alpha == 0.05);
    bool noted_alpha = false, noted_seed = false;
    for (const std::string& note : load.notes) {
        noted_alpha = noted_alpha || note.find("[interval] alpha") != std::string::npos;
        noted_seed = noted_seed || note.find("[interval] seed") != std::string::npos;
    }
    CHECK(noted_alpha);
    CHECK(noted_seed);
}

TEST_CASE("empty config is an error") {
    CHECK_THROWS_WITH_AS(parse(""), "config: no scenarios defined", std::invalid_argument);
    CHECK_THROWS_AS(parse("# only a comment\n\n"), std::invalid_argument);
}

TEST_CASE("errors carry line numbers") {
    CHECK(error_of("[a]\nJ=40\nreps=10\nJ=50\n").find("line 4") != std::string::npos);
    CHECK(error_of("[a]\nJ=40\nbogus_key=1\n").find("line 3") != std::string::npos);
    CHECK(error_of("J=40\n").find("line 1") != std::string::npos);
    CHECK(error_of("[a]\nJ forty\n").find("line 2") != std::string::npos);
    CHECK(error_of("[a]\nJ=forty\n").find("line 2") != std::string::npos);
    CHECK(error_of("[a]\nJ=40\n[a]\nJ=40\n").find("line 3") != std::string::npos);
}

TEST_CASE("gi sections need the interval") {
    CHECK(error_of("[a]\nJ=40\nprocedure=gi\nreps=10\n").find("l/u") != std::string::npos);
}

TEST_CASE("sections without a seed derive distinct seeds") {
    const ConfigLoad load = parse("[a]\nJ=40\nreps=10\n[b]\nJ=40\nreps=10\n", 5);
    REQUIRE(load.specs.size() == 2);
    CHECK(load.specs[0].master_seed != load.specs[1].master_seed);
}

TEST_CASE("validation failures point at the section") {
    CHECK(error_of("[a]\nJ=1\nreps=10\n").find("J must be >= 2") != std::string::npos);
}

TEST_CASE("plot data emission") {
    ScenarioResult row;
    row.scenario = "unweighted_J100";
    row.num_streams = 100;
    row.ess = 1432.25;
    row.ess_se = 6.5;
    std::ostringstream out;
    emit_plot_data(std::vector<ScenarioResult>{row}, out);
    CHECK(out.str() == "J,scenario,ess,ess_se\n100,unweighted_J100,1432.25,6.5\n");

    const std::vector<ScenarioResult> none;
    std::ostringstream sink;
    CHECK_THROWS_AS(emit_plot_data(none, sink), std::invalid_argument);
}

}  // TEST_SUITE
