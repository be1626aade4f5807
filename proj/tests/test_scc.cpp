#include <doctest.h>

#include <functional>

#include "shmv/dp.hpp"
#include "shmv/generators.hpp"
#include "shmv/scc.hpp"
#include "support.hpp"

using namespace shmv;
using shmv::test::lcr_from;

namespace {

// Longest path (in nodes) of a DAG by exhaustive enumeration.
int brute_longest(const SccGraph& g) {
    std::function<int(int)> from = [&](int v) {
        int best = 1;
        for (auto [a, b] : g.edges)
            if (a == v) best = std::max(best, 1 + from(b));
        return best;
    };
    int best = 0;
    for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) best = std::max(best, from(v));
    return best;
}

} // namespace

TEST_CASE("restricted leader on the running example") {
    const auto running = test::load_lcr("running_example.json");
    const Thread r0 = restricted_leader(running.leader, {1, 3}, 0);
    for (const auto& t : r0.transitions()) CHECK(t.op.kind != OpKind::Read);
    CHECK(r0.transitions().size() == 2); // !b and eps
    const Thread r2 = restricted_leader(running.leader, {1, 3}, 2);
    CHECK(r2.transitions() == running.leader.transitions());
    const Thread r1 = restricted_leader(running.leader, {1, 3}, 1);
    CHECK(r1.transitions().size() == running.leader.transitions().size() - 1); // ?c removed
}

TEST_CASE("scc depth") {
    const auto cyc = lcr_from(R"({"domain":["a0","a"],"init":"a0","leader":{"init":"q0",
        "trans":[["q0","!a","q1"],["q1","eps","q2"],["q2","!a","q0"]]},"contributors":[{"init":"p0"}],"unsafe":[]})");
    CHECK(scc_depth(cyc.leader, {}).depth == 1);

    const auto chain = lcr_from(R"({"domain":["a0","a"],"init":"a0","leader":{"init":"q0",
        "trans":[["q0","!a","q1"],["q1","eps","q2"]]},"contributors":[{"init":"p0"}],"unsafe":[]})");
    CHECK(scc_depth(chain.leader, {}).depth == 3);

    const auto running = test::load_lcr("running_example.json");
    const auto d = scc_depth(running.leader, {1, 3});
    CHECK(d.depth == brute_longest(d.graph));
    CHECK(d.depth >= 3);
}

TEST_CASE("scc candidates on the running example") {
    const auto inst = prepare_for_witness(test::load_lcr("running_example.json"));
    const auto w = parse_scc_witness({"~a", "scc:{q0}@1", "_", "scc:{q1}@1", "b", "~c", "scc:{q2}@2"}, inst);
    CHECK(check_scc_validity(w, inst) == SccValidity::Valid);
    // q0 and q2 are not connected by a single transition
    const auto gap = parse_scc_witness({"~a", "scc:{q0}@1", "_", "scc:{q2}@1", "_", "~c", "scc:{q3}@2"}, inst);
    CHECK(check_scc_validity(gap, inst) == SccValidity::NoLeaderRun);

    const auto r = solve_lcr_scc(test::load_lcr("running_example.json"));
    REQUIRE(r.verdict.reachable());
    REQUIRE(r.witness);
    CHECK(check_scc_validity(*r.witness, r.normalized) == SccValidity::Valid);
}

TEST_CASE("single-state unsafe leader") {
    const auto inst = lcr_from(R"({"domain":["a0"],"init":"a0","leader":{"init":"q0"},
        "contributors":[{"init":"p0"}],"unsafe":["q0"]})");
    CHECK(solve_lcr_scc(inst).verdict.reachable());
}

TEST_CASE("reads served by earlier first writes of the same contributor") {
    const auto inst = lcr_from(R"({"domain":["a0","a","b"],"init":"a0",
        "leader":{"init":"q0","trans":[["q0","?b","q1"]]},
        "contributors":[{"init":"p0","trans":[["p0","!a","p1"],["p1","?a","p2"],["p2","!b","p2"]]}],
        "unsafe":["q1"]})");
    CHECK(solve_lcr_scc(inst).verdict.reachable());
    CHECK(solve_lcr_dp(inst).verdict.reachable());
}

TEST_CASE("chains of first writes longer than the depth bound") {
    const auto inst = lcr_from(R"({"domain":["a0","x","z","w","a","b","c"],"init":"a0",
        "leader":{"init":"q0","trans":[["q0","!x","q1"],["q1","!z","q1"],["q1","!w","q1"],["q1","?c","q2"]]},
        "contributors":[{"init":"p0","trans":[["p0","?x","p1"],["p1","!a","p1"]]},
                        {"init":"r0","trans":[["r0","?a","r1"],["r1","?z","r2"],["r2","!b","r2"]]},
                        {"init":"s0","trans":[["s0","?b","s1"],["s1","?w","s2"],["s2","!c","s2"]]}],
        "unsafe":["q2"]})");
    CHECK(solve_lcr_dp(inst).verdict.reachable());
    CHECK(solve_lcr_scc(inst).verdict.reachable());
}

TEST_CASE("scc witnesses exist exactly when plain witnesses do") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = random_lcr({}, seed);
        const auto s = solve_lcr_scc(inst);
        CHECK(s.verdict.reachable() == solve_lcr_witness(inst).verdict.reachable());
        if (s.verdict.reachable()) {
            REQUIRE(s.witness);
            CHECK(check_scc_validity(*s.witness, s.normalized) == SccValidity::Valid);
            CHECK(parse_scc_witness(s.verdict.certificate, s.normalized) == *s.witness);
        }
    }
}
