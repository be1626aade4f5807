#include <doctest.h>

#include <algorithm>
#include <set>

#include "shmv/dp.hpp"
#include "shmv/generators.hpp"
#include "shmv/oracles.hpp"
#include "support.hpp"

using namespace shmv;
using shmv::test::lcr_from;

namespace {

StateSet named(const Thread& c, std::initializer_list<const char*> names) {
    StateSet s = 0;
    for (const char* n : names) s |= StateSet{1} << c.find_state(n).value();
    return s;
}

// All edges of the explicit saturation graph reachable from the initial node.
std::set<std::pair<SaturationNode, SaturationNode>> explicit_edges(const LcrInstance& inst) {
    const auto r = explicit_graph_reach(inst, {}, true);
    std::set<std::pair<SaturationNode, SaturationNode>> edges;
    for (const auto& v : r.reached)
        for (const auto& w : saturation_successors(inst, inst.contributors[0], v)) edges.insert({v, w});
    return edges;
}

} // namespace

TEST_CASE("table of the subset example") {
    const auto inst = test::load_lcr("subset_example.json");
    DpOptions o;
    o.full_table = true;
    const auto r = solve_lcr_dp(inst, o);
    CHECK(r.verdict.reachable());
    const Thread& c = inst.contributors[0];
    const int q1 = inst.leader.find_state("q1").value();
    const auto pairs = r.table.pairs(named(c, {"p0", "p1"}));
    CHECK(pairs == std::vector<std::pair<int, int>>{{q1, 1}, {q1, 3}});
    CHECK(dump_table(r.table, inst).find("S={p0,p1} : (q1,a) (q1,c)\n") != std::string::npos);
}

TEST_CASE("slice of the subset example") {
    const auto inst = test::load_lcr("subset_example.json");
    const Thread& c = inst.contributors[0];
    const StateSet W = named(c, {"p0"});
    const int p1 = c.find_state("p1").value();
    const Slice s = build_slice(inst, W, p1);
    CHECK(s.S == named(c, {"p0", "p1"}));
    const int q1 = inst.leader.find_state("q1").value();
    const SaturationNode from{q1, 1, W};
    const SaturationNode to{q1, 1, s.S};
    CHECK(std::find(s.edges.begin(), s.edges.end(), std::make_pair(from, to)) != s.edges.end());

    // every reachable explicit edge between the two levels is in the slice
    for (const auto& e : explicit_edges(inst))
        if ((e.first.set == W || e.first.set == s.S) && (e.second.set == W || e.second.set == s.S))
            CHECK(std::find(s.edges.begin(), s.edges.end(), e) != s.edges.end());

    const auto reached = reach_in_slice({{q1, 1}}, s);
    CHECK(reached == std::vector<std::pair<int, int>>{{q1, 1}, {q1, 3}});
    CHECK(reach_in_slice({}, s).empty());
}

TEST_CASE("slice without a way into p has no cross edges") {
    const auto inst = lcr_from(R"({"domain":["a0","a"],"init":"a0","leader":{"init":"q0"},
        "contributors":[{"init":"p0","trans":[["p1","!a","p0"]]}],"unsafe":[]})");
    const Slice s = build_slice(inst, 1, 1);
    for (const auto& e : s.edges) CHECK(e.first.set == e.second.set);
}

TEST_CASE("unreachable unsafe state") {
    auto inst = lcr_from(R"({"domain":["a0","a","b","c"],"init":"a0","kind":"lcr",
        "leader":{"init":"q0","trans":[["q0","!a","q1"],["q1","?b","q2"],["q2","?c","q3"],["x","eps","x"]]},
        "contributors":[{"init":"p0","trans":[["p0","?a","p1"],["p1","!c","p1"],["p0","?a","p2"],["p2","!b","p0"]]}],
        "unsafe":["x"]})");
    CHECK_FALSE(solve_lcr_dp(inst).verdict.reachable());
    CHECK_FALSE(explicit_graph_reach(inst).verdict.reachable());
}

TEST_CASE("explicit graph on the subset example") {
    const auto inst = test::load_lcr("subset_example.json");
    const auto r = explicit_graph_reach(inst, {}, true);
    CHECK(r.verdict.reachable());
    const Thread& c = inst.contributors[0];
    const SaturationNode target{inst.leader.find_state("q1").value(), 1, named(c, {"p0", "p1"})};
    CHECK(std::find(r.reached.begin(), r.reached.end(), target) != r.reached.end());

    const auto unsafe_now = lcr_from(R"({"domain":["a0"],"init":"a0","leader":{"init":"q0"},
        "contributors":[{"init":"p0"}],"unsafe":["q0"]})");
    CHECK(explicit_graph_reach(unsafe_now).verdict.reachable());
    CHECK(solve_lcr_dp(unsafe_now).verdict.reachable());
}

TEST_CASE("explicit graph respects its contributor cap") {
    const auto inst = random_lcr({3, 13, 3, 1}, 1);
    CHECK(explicit_graph_reach(inst).verdict.outcome == Outcome::BudgetExceeded);
}

TEST_CASE("dp agrees with the explicit graph and with normalization") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto inst = random_lcr({}, seed);
        const bool dp = solve_lcr_dp(inst).verdict.reachable();
        CHECK(dp == explicit_graph_reach(inst).verdict.reachable());
        CHECK(dp == solve_lcr_dp(normalize_leader(inst)).verdict.reachable());
    }
}

TEST_CASE("several templates equal their merge") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = random_lcr({3, 3, 3, 2}, seed);
        auto merged = inst;
        merged.contributors = {merge_contributors(inst.contributors)};
        const bool dp = solve_lcr_dp(inst).verdict.reachable();
        CHECK(dp == solve_lcr_dp(merged).verdict.reachable());
        bool bfs = false;
        for (int t = 0; t <= 4 && !bfs; ++t) bfs = lcr_explicit_bfs(inst, t);
        if (bfs) CHECK(dp);
    }
}

TEST_CASE("dp certificate shape") {
    const auto r = solve_lcr_dp(test::load_lcr("running_example.json"));
    REQUIRE(r.verdict.reachable());
    REQUIRE(!r.verdict.certificate.empty());
    CHECK(r.verdict.certificate.front().rfind("start:", 0) == 0);
    CHECK(r.verdict.certificate.back().rfind("end:", 0) == 0);
}
