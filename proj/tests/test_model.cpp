#include <doctest.h>

#include <algorithm>

#include "shmv/generators.hpp"
#include "shmv/model.hpp"
#include "support.hpp"

using namespace shmv;
using shmv::test::lcr_from;

TEST_CASE("parse the running example") {
    const auto inst = test::load_lcr("running_example.json");
    CHECK(inst.leader.size() == 5);
    REQUIRE(inst.contributors.size() == 1);
    CHECK(inst.contributors[0].size() == 3);
    CHECK(inst.domain == std::vector<std::string>{"a0", "a", "b", "c"});
    CHECK(inst.unsafe == std::vector<int>{inst.leader.find_state("q4").value()});
}

TEST_CASE("minimal instance") {
    const auto inst = lcr_from(R"({"domain":["a0"],"init":"a0","leader":{"init":"q0"},
        "contributors":[{"init":"p0"}],"unsafe":["q0"]})");
    CHECK(inst.leader.size() == 1);
    CHECK(inst.leader.transitions().empty());
    CHECK(inst.is_unsafe(0));
}

TEST_CASE("unknown symbol names the identifier") {
    try {
        (void)lcr_from(R"({"domain":["a0"],"init":"a0","leader":{"init":"q0","trans":[["q0","?z","q1"]]},
            "contributors":[{"init":"p0"}],"unsafe":[]})");
        FAIL("expected a semantic error");
    } catch (const SemanticError& e) {
        CHECK(e.identifier() == "z");
    }
    CHECK_THROWS_AS((void)lcr_from(R"({"domain":["a0"],"init":"b","leader":{"init":"q0"},"contributors":[{"init":"p0"}]})"),
                    SemanticError);
    CHECK_THROWS_AS((void)lcr_from(R"({"domain":["a0"],"init":"a0","leader":{"init":"q0"},
        "contributors":[{"init":"p0"}],"unsafe":["nope"]})"),
                    SemanticError);
}

TEST_CASE("syntax errors carry a position") {
    try {
        (void)parse_program("{\"domain\": [\"a0\",\n  ]}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() >= 1);
    }
}

TEST_CASE("duplicate transitions are merged") {
    const auto inst = lcr_from(R"({"domain":["a0","a"],"init":"a0","leader":{"init":"q0",
        "trans":[["q0","!a","q1"],["q0","!a","q1"]]},"contributors":[{"init":"p0"}],"unsafe":["q1"]})");
    CHECK(inst.leader.transitions().size() == 1);
}

TEST_CASE("serialization round trip") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RandomLcrParams p;
        p.templates = 1 + static_cast<int>(seed % 2);
        const auto inst = random_lcr(p, seed);
        const auto text = serialize_program(inst);
        const auto back = std::get<LcrInstance>(parse_program(text));
        CHECK(serialize_program(back) == text);
        CHECK(back.leader.transitions() == inst.leader.transitions());
        CHECK(back.unsafe == inst.unsafe);

        const auto b = random_bsr({}, seed);
        const auto btext = serialize_program(b);
        CHECK(serialize_program(std::get<BsrInstance>(parse_program(btext))) == btext);
    }
    const auto running = test::load_lcr("running_example.json");
    CHECK(serialize_program(lcr_from(serialize_program(running))) == serialize_program(running));
}

TEST_CASE("bsr targets and memory constraint") {
    const auto inst = test::bsr_from(R"({"kind":"bsr","domain":["a0","x"],"init":"a0",
        "threads":[{"name":"A","init":"s0","trans":[["s0","!x","s1"]]},{"name":"B","init":"t0"}],
        "target":{"A":["s1"],"memory":["x"]},"stages":1})");
    CHECK(inst.target[0] == std::vector<int>{1});
    CHECK(inst.target[1] == std::vector<int>{0}); // unconstrained thread: any state
    REQUIRE(inst.target_memory);
    CHECK(*inst.target_memory == std::vector<int>{1});
    Configuration c{{1, 0}, 1};
    CHECK(inst.in_target(c));
    c.memory = 0;
    CHECK_FALSE(inst.in_target(c));
}

TEST_CASE("merge_contributors") {
    const auto two = lcr_from(R"({"domain":["a0","a"],"init":"a0","leader":{"init":"q0"},
        "contributors":[{"init":"p0","trans":[["p0","!a","p1"]]},{"init":"r0","trans":[["r0","?a","r1"]]}],
        "unsafe":[]})");
    const Thread one = merge_contributors({two.contributors[0]});
    CHECK(one.size() == 3);
    const Thread m = merge_contributors(two.contributors);
    CHECK(m.size() == 5);
    const auto eps = std::count_if(m.transitions().begin(), m.transitions().end(),
                                   [](const Transition& t) { return t.op.kind == OpKind::Eps; });
    CHECK(eps == 2);
    CHECK(m.transitions().size() == 4);
}

TEST_CASE("normalize_leader adds shortcuts for write then read") {
    const auto inst = lcr_from(R"({"domain":["a0","a"],"init":"a0","leader":{"init":"q0",
        "trans":[["q0","!a","q1"],["q1","?a","q2"]]},"contributors":[{"init":"p0"}],"unsafe":["q2"]})");
    const auto norm = normalize_leader(inst);
    // originals are kept
    for (const auto& t : inst.leader.transitions()) {
        const auto& from = inst.leader.state_name(t.from);
        const auto& to = inst.leader.state_name(t.to);
        bool found = false;
        for (const auto& u : norm.leader.transitions())
            found |= norm.leader.state_name(u.from) == from && norm.leader.state_name(u.to) == to && u.op == t.op;
        CHECK(found);
    }
    // the read of the own write is available as eps after the write
    bool shortcut = false;
    for (const auto& u : norm.leader.transitions())
        shortcut |= u.op.kind == OpKind::Eps && norm.is_unsafe(u.to);
    CHECK(shortcut);
}

TEST_CASE("normalize_leader leaves the running example alone") {
    const auto inst = test::load_lcr("running_example.json");
    const auto norm = normalize_leader(inst);
    CHECK(norm.leader.size() == inst.leader.size());
    CHECK(norm.leader.transitions() == inst.leader.transitions());
}

TEST_CASE("normalize_leader does not invent reads of writes made elsewhere") {
    // q1 is entered by !b, the !a into q1 comes from an unreachable state
    const auto inst = lcr_from(R"({"domain":["a0","a","b"],"init":"a0","leader":{"init":"q0",
        "trans":[["q0","!b","q1"],["s","!a","q1"],["q1","?a","q2"]]},"contributors":[{"init":"p0"}],
        "unsafe":["q2"]})");
    const auto norm = normalize_leader(inst);
    std::vector<const Thread*> threads{&norm.leader};
    Configuration c0{{norm.leader.initial()}, 0};
    std::vector<Configuration> queue{c0};
    bool hit = false;
    for (std::size_t i = 0; i < queue.size() && queue.size() < 100; ++i) {
        hit |= norm.is_unsafe(queue[i].pc[0]);
        for (auto& s : successors(threads, queue[i]))
            if (std::find(queue.begin(), queue.end(), s.next) == queue.end()) queue.push_back(s.next);
    }
    CHECK_FALSE(hit);
}

TEST_CASE("successors of the running example") {
    const auto inst = test::load_lcr("running_example.json");
    const Thread& L = inst.leader;
    const Thread& C = inst.contributors[0];
    std::vector<const Thread*> threads{&L, &C};
    const Configuration c{{L.initial(), C.initial()}, 0};
    const auto succ = successors(threads, c);
    const int p1 = C.find_state("p1").value();
    const int p2 = C.find_state("p2").value();
    bool wrote_a = false;
    for (const auto& s : succ) {
        CHECK(s.next.pc[1] != p2);
        wrote_a |= s.next.pc[1] == p1 && s.next.memory == 1 && s.thread == 1;
    }
    CHECK(wrote_a);
    CHECK(succ.size() == 1); // the leader waits for a
}

TEST_CASE("deadlocked configuration has no successors") {
    const auto inst = lcr_from(R"({"domain":["a0","a"],"init":"a0","leader":{"init":"q0",
        "trans":[["q0","?a","q1"]]},"contributors":[{"init":"p0","trans":[["p0","?a","p1"]]}],"unsafe":["q1"]})");
    std::vector<const Thread*> threads{&inst.leader, &inst.contributors[0]};
    CHECK(successors(threads, Configuration{{0, 0}, 0}).empty());
}

TEST_CASE("successors match a naive scan") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto b = random_bsr({3, 3, 3, 1}, seed);
        const Program& p = b.program;
        for (int x = 0; x < 27; ++x) {
            Configuration c{{x % 3, x / 3 % 3, x / 9}, static_cast<int>(seed % 3)};
            std::size_t count = 0;
            for (std::size_t i = 0; i < p.threads.size(); ++i)
                for (const auto& t : p.threads[i].transitions()) {
                    if (t.from != c.pc[i]) continue;
                    if (t.op.kind == OpKind::Read && t.op.sym != c.memory) continue;
                    ++count;
                }
            const auto succ = successors(p, c);
            CHECK(succ.size() == count);
            for (const auto& s : succ)
                if (s.op.kind == OpKind::Read) CHECK(c.memory == s.op.sym);
        }
    }
}
