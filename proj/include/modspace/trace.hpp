#ifndef MODSPACE_TRACE_HPP
#define MODSPACE_TRACE_HPP

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "modspace/error.hpp"

namespace modspace {

/// One row of the traceability matrix: a mathematical anchor, the code that
/// realizes it, the test that exercises it and the acceptance criterion.
struct TraceEntry {
    std::string anchor;
    std::string summary;
    std::string operation;
    std::string test;
    std::string criterion;
};

struct TraceReport {
    bool pass = true;
    std::vector<std::string> orphans;        // anchors without any entry
    std::vector<std::string> unknown;        // entries whose anchor is not in scope
    std::vector<std::string> missing_tests;  // tests named in the matrix but absent from the sources
    std::size_t entries = 0;
};

/// The anchors every matrix must cover.
inline const std::vector<std::string>& in_scope_anchors() {
    static const std::vector<std::string> a = {
        "evolution_equation",     "polynomial_nonlinearity", "window_axioms",         "box_operators",
        "two_sided_localization", "localized_integral_eq",   "localized_duhamel",     "modulation_norm",
        "x_space_norm",           "time_space_norm",         "cross_term_decay",      "norm_equivalence",
        "banach_algebra",         "multilinear_estimate",    "semigroup_smoothing",   "remainder_decay",
        "derivative_estimate",    "nonlinear_piece_bounds",  "picard_iteration",      "contraction_recipe",
        "a_priori_energy",        "symbol_class",            "triple_decay",          "symbol_remainder",
        "pde_residual",           "parameter_recipes",
    };
    return a;
}

inline std::vector<TraceEntry> parse_trace_matrix(const nlohmann::json& j) {
    if (!j.contains("entries") || !j.at("entries").is_array()) throw ConfigError("trace matrix needs an 'entries' array");
    std::vector<TraceEntry> out;
    for (const auto& e : j.at("entries")) {
        TraceEntry t;
        try {
            t.anchor = e.at("anchor").get<std::string>();
            t.summary = e.value("summary", "");
            t.operation = e.at("operation").get<std::string>();
            t.test = e.at("test").get<std::string>();
            t.criterion = e.at("criterion").get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(std::string("malformed trace entry: ") + ex.what());
        }
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<TraceEntry> load_trace_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read trace matrix '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("trace matrix is not valid JSON: " + std::string(e.what()));
    }
    return parse_trace_matrix(j);
}

/// Concatenated text of every source under dir, for test-name lookup.
inline std::string read_sources(const std::filesystem::path& dir) {
    std::string all;
    for (const auto& f : std::filesystem::directory_iterator(dir)) {
        if (f.path().extension() != ".cpp") continue;
        std::ifstream in(f.path());
        all.append(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return all;
}

/// Fails on orphaned anchors; with test sources given, also on tests that do not exist.
inline TraceReport trace_check(const std::vector<TraceEntry>& entries, const std::string& test_sources = {}) {
    TraceReport rep;
    rep.entries = entries.size();
    const auto& scope = in_scope_anchors();
    const std::set<std::string> scope_set(scope.begin(), scope.end());
    std::set<std::string> covered;
    for (const auto& e : entries) {
        if (!scope_set.count(e.anchor)) {
            rep.unknown.push_back(e.anchor);
            continue;
        }
        if (e.operation.empty() || e.test.empty() || e.criterion.empty()) continue;
        if (!test_sources.empty() && test_sources.find("\"" + e.test + "\"") == std::string::npos) {
            rep.missing_tests.push_back(e.test);
            continue;
        }
        covered.insert(e.anchor);
    }
    for (const auto& a : scope) {
        if (!covered.count(a)) rep.orphans.push_back(a);
    }
    rep.pass = rep.orphans.empty() && rep.unknown.empty() && rep.missing_tests.empty();
    return rep;
}

}  // namespace modspace

#endif  // MODSPACE_TRACE_HPP
