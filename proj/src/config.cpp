#include "seqweight/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "seqweight/rng.hpp"

namespace seqweight {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view v, int line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(line, "expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

std::int64_t parse_int(std::string_view v, int line) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(line, "expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

std::uint64_t parse_uint(std::string_view v, int line) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(line, "expected an unsigned integer, got '" + std::string(v) + "'");
    }
    return out;
}

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)
};

ScenarioSpec build_spec(const Section& section, std::uint64_t default_seed,
                        std::uint64_t ordinal, std::vector<std::string>& notes) {
    ScenarioSpec spec;
    spec.name = section.name;
    bool saw_alpha = false, saw_beta = false, saw_seed = false, saw_j = false;
    bool saw_l = false, saw_u = false;
    for (const auto& [key, entry] : section.entries) {
        const auto& [value, line] = entry;
        if (key == "J") {
            spec.num_streams = static_cast<int>(parse_int(value, line));
            saw_j = true;
        } else if (key == "signal_fraction") {
            spec.signal_fraction = parse_double(value, line);
        } else if (key == "mu") {
            spec.mu = parse_double(value, line);
        } else if (key == "alpha") {
            spec.alpha = parse_double(value, line);
            saw_alpha = true;
        } else if (key == "beta") {
            spec.beta = parse_double(value, line);
            saw_beta = true;
        } else if (key == "eta") {
            spec.eta = parse_double(value, line);
        } else if (key == "r") {
            spec.r = parse_double(value, line);
        } else if (key == "procedure") {
            if (value == "gap") {
                spec.procedure = Procedure::Gap;
            } else if (value == "gi") {
                spec.procedure = Procedure::GapIntersection;
            } else {
                fail(line, "procedure must be 'gap' or 'gi'");
            }
        } else if (key == "l") {
            spec.l = static_cast<int>(parse_int(value, line));
            saw_l = true;
        } else if (key == "u") {
            spec.u = static_cast<int>(parse_int(value, line));
            saw_u = true;
        } else if (key == "reps") {
            spec.reps = parse_int(value, line);
        } else if (key == "seed") {
            spec.master_seed = parse_uint(value, line);
            saw_seed = true;
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
    if (!saw_j) fail(section.line, "section [" + section.name + "] is missing J");
    if (spec.procedure == Procedure::GapIntersection && (!saw_l || !saw_u)) {
        fail(section.line, "section [" + section.name + "] uses procedure=gi but lacks l/u");
    }
    if (!saw_alpha) {
        notes.push_back("[" + section.name + "] alpha not set, using default 0.05");
    }
    if (!saw_beta && spec.procedure == Procedure::GapIntersection) {
        notes.push_back("[" + section.name + "] beta not set, using default 0.05");
    }
    if (!saw_seed) {
        spec.master_seed = derive_subseed(default_seed, ordinal);
        notes.push_back("[" + section.name + "] seed not set, derived from --seed");
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        fail(section.line, e.what());
    }
    return spec;
}

}  // namespace

ConfigLoad load_config(std::istream& in, std::uint64_t default_seed) {
    std::vector<Section> sections;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                fail(line_no, "malformed section header");
            }
            Section section;
            section.name = std::string(trim(line.substr(1, line.size() - 2)));
            section.line = line_no;
            if (section.name.empty()) fail(line_no, "empty scenario name");
            for (const Section& existing : sections) {
                if (existing.name == section.name) {
                    fail(line_no, "duplicate scenario name '" + section.name + "'");
                }
            }
            sections.push_back(std::move(section));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected key=value or [section]");
        }
        if (sections.empty()) fail(line_no, "key=value before any [section]");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) fail(line_no, "empty key");
        auto& entries = sections.back().entries;
        if (entries.count(key)) fail(line_no, "duplicate key '" + key + "' in section");
        entries.emplace(key, std::pair{value, line_no});
    }
    if (sections.empty()) {
        throw std::invalid_argument("config: no scenarios defined");
    }
    ConfigLoad load;
    std::uint64_t ordinal = 0;
    for (const Section& section : sections) {
        load.specs.push_back(build_spec(section, default_seed, ordinal++, load.notes));
    }
    return load;
}

ConfigLoad load_config_file(const std::string& path, std::uint64_t default_seed) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return load_config(in, default_seed);
}

void emit_plot_data(std::span<const ScenarioResult> results, std::ostream& out) {
    if (results.empty()) {
        throw std::invalid_argument("emit_plot_data: no results");
    }
    out << "J,scenario,ess,ess_se\n";
    char buf[96];
    for (const ScenarioResult& r : results) {
        std::snprintf(buf, sizeof buf, "%d,%s,%.10g,%.10g\n", r.num_streams,
                      r.scenario.c_str(), r.ess, r.ess_se);
        out << buf;
    }
}

}  // namespace seqweight
