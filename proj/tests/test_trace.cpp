#include <algorithm>

#include <catch2/catch_amalgamated.hpp>

#include "modspace/trace.hpp"

using namespace modspace;

namespace {

const std::string corpus = MODSPACE_CORPUS_DIR;

std::vector<TraceEntry> matrix() { return load_trace_matrix(corpus + "/trace_matrix.json"); }

}  // namespace

TEST_CASE("full matrix covers every anchor", "[trace]") {
    const auto rep = trace_check(matrix(), read_sources(corpus + "/../tests"));
    INFO("orphans: " << rep.orphans.size() << ", missing tests: " << rep.missing_tests.size());
    CHECK(rep.pass);
    CHECK(rep.orphans.empty());
    CHECK(rep.missing_tests.empty());
    CHECK(rep.entries >= in_scope_anchors().size());
}

TEST_CASE("removing an entry names the orphaned anchor", "[trace]") {
    auto m = matrix();
    m.erase(std::remove_if(m.begin(), m.end(), [](const TraceEntry& e) { return e.anchor == "pde_residual"; }), m.end());
    const auto rep = trace_check(m);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.orphans.size() == 1);
    CHECK(rep.orphans.front() == "pde_residual");
}

TEST_CASE("energy anchor maps to the ledger and its criterion", "[trace]") {
    const auto m = matrix();
    const auto it = std::find_if(m.begin(), m.end(), [](const TraceEntry& e) { return e.anchor == "a_priori_energy"; });
    REQUIRE(it != m.end());
    CHECK(it->operation == "evolve.energy_ledger");
    CHECK(it->criterion == "10");
}

TEST_CASE("unknown anchors and missing tests fail", "[trace]") {
    auto m = matrix();
    m.push_back({"not_an_anchor", "", "x.y", "z", "1"});
    CHECK_FALSE(trace_check(m).pass);

    auto m2 = matrix();
    for (auto& e : m2) {
        if (e.anchor == "triple_decay") e.test = std::string("absent") + "_case";  // must not appear quoted in any source
    }
    const auto rep = trace_check(m2, read_sources(corpus + "/../tests"));
    CHECK_FALSE(rep.pass);
    CHECK(std::find(rep.orphans.begin(), rep.orphans.end(), "triple_decay") != rep.orphans.end());
    CHECK_THROWS_AS(parse_trace_matrix(nlohmann::json::object()), ConfigError);
}
