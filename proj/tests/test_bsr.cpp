#include <doctest.h>

#include <algorithm>

#include "shmv/bsr.hpp"
#include "shmv/generators.hpp"
#include "support.hpp"

using namespace shmv;

namespace {

BsrOptions product() {
    BsrOptions o;
    o.engine = BsrEngine::Product;
    return o;
}

const char* kTwoWriters = R"({"kind":"bsr","domain":["a0","x","y"],"init":"a0",
    "threads":[{"name":"A","init":"s0","trans":[["s0","!x","s1"]]},
               {"name":"B","init":"t0","trans":[["t0","?x","t1"],["t1","!y","t2"]]},
               {"name":"C","init":"u0","trans":[["u0","?y","u1"]]}],
    "target":{"C":["u1"]},"stages":1})";

} // namespace

TEST_CASE("empty computation with no stages") {
    const auto inst = test::bsr_from(R"({"kind":"bsr","domain":["a0","x"],"init":"a0",
        "threads":[{"name":"A","init":"s0","trans":[["s0","!x","s1"]]}],"target":{"A":["s0"]},"stages":0})");
    for (const auto& o : {BsrOptions{}, product()}) {
        const auto r = solve_bsr(inst, o);
        CHECK(r.verdict.reachable());
        REQUIRE(r.trace);
        CHECK(r.trace->empty());
    }
}

TEST_CASE("two writers need two stages") {
    auto inst = test::bsr_from(kTwoWriters);
    CHECK_FALSE(solve_bsr(inst).verdict.reachable());
    CHECK_FALSE(solve_bsr(inst, product()).verdict.reachable());
    inst.stages = 2;
    for (const auto& o : {BsrOptions{}, product()}) {
        const auto r = solve_bsr(inst, o);
        REQUIRE(r.verdict.reachable());
        REQUIRE(r.trace);
        CHECK(check_stage_trace(*r.trace, inst).ok);
        int boundaries = 0;
        for (const auto& st : *r.trace) boundaries += st.boundary;
        CHECK(boundaries == 2);
    }
    CHECK(unrestricted_reach(inst).reachable());
}

TEST_CASE("trace checker rejects a second writer within a stage") {
    auto inst = test::bsr_from(kTwoWriters);
    inst.stages = 2;
    const auto& A = inst.program.threads[0];
    const auto& B = inst.program.threads[1];
    StageTrace trace;
    Configuration c = initial_configuration(inst.program);
    trace.push_back({true, 0, MemoryOp::eps(), c});
    c.pc[0] = A.find_state("s1").value();
    c.memory = 1;
    trace.push_back({false, 0, MemoryOp::write(1), c});
    c.pc[1] = B.find_state("t1").value();
    trace.push_back({false, 1, MemoryOp::read(1), c});
    c.pc[1] = B.find_state("t2").value();
    c.memory = 2;
    trace.push_back({false, 1, MemoryOp::write(2), c});
    const auto check = check_stage_trace(trace, inst);
    CHECK_FALSE(check.ok);
    CHECK(check.failed_step == 3);

    // the same run with a boundary before B writes, but stopping short of the target
    trace.insert(trace.begin() + 3, TraceStep{true, 1, MemoryOp::eps(), trace[2].after});
    const auto short_of_target = check_stage_trace(trace, inst);
    CHECK_FALSE(short_of_target.ok);
    CHECK(short_of_target.failed_step == 5);
}

TEST_CASE("hand-built trace for the constant-domain construction") {
    CnfFormula f;
    f.num_vars = 1;
    f.clauses = {{{1, true}}};
    const auto inst = gen_bsr_constant_domain(f).bsr();
    const auto& prog = inst.program;
    REQUIRE(prog.threads.size() == 2);
    const Thread& X = prog.threads[0];
    const Thread& V = prog.threads[1];
    const int hash = 1, one = 3;
    StageTrace trace;
    Configuration c = initial_configuration(prog);
    auto step = [&](int thread, MemoryOp op, const std::string& to) {
        c.pc[thread] = prog.threads[thread].find_state(to).value();
        if (op.kind == OpKind::Write) c.memory = op.sym;
        trace.push_back({false, thread, op, c});
    };
    step(0, MemoryOp::read(0), "p1^0");
    trace.push_back({true, 1, MemoryOp::eps(), c});
    step(1, MemoryOp::write(one), "c0~!1");
    step(0, MemoryOp::read(one), "p1^0~?1");
    step(1, MemoryOp::write(hash), "c0~!1!#");
    step(0, MemoryOp::read(hash), "p1^0~?1?#");
    step(1, MemoryOp::write(one), "c0~!1!#!1");
    step(0, MemoryOp::read(one), "p1^0~?1?#?1");
    step(1, MemoryOp::write(hash), "c1");
    step(0, MemoryOp::read(hash), "p1^1");
    const auto check = check_stage_trace(trace, inst);
    CHECK_MESSAGE(check.ok, check.reason);
    (void)X;
    (void)V;
}

TEST_CASE("engines agree and certificates replay") {
    int reachable = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        RandomBsrParams p{1 + static_cast<int>(seed % 3), 2 + static_cast<int>(seed % 3), 3,
                          static_cast<int>(seed % 3)};
        const auto inst = random_bsr(p, seed);
        const auto a = solve_bsr(inst);
        const auto b = solve_bsr(inst, product());
        CHECK(a.verdict.outcome == b.verdict.outcome);
        for (const auto* r : {&a, &b})
            if (r->verdict.reachable()) {
                REQUIRE(r->trace);
                const auto check = check_stage_trace(*r->trace, inst);
                CHECK_MESSAGE(check.ok, check.reason);
            }
        CHECK(static_cast<double>(b.verdict.stats.nodes) <= product_state_bound(inst));
        reachable += a.verdict.reachable();
    }
    CHECK(reachable > 30);
    CHECK(reachable < 270);
}

TEST_CASE("stage monotonicity and saturation") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto inst = random_bsr({3, 3, 3, 0}, seed);
        bool prev = false;
        for (int s = 0; s <= 4; ++s) {
            inst.stages = s;
            const bool now = solve_bsr(inst).verdict.reachable();
            if (prev) CHECK(now);
            prev = now;
        }
        // a shortest run is no longer than the number of configurations explored
        const auto plain = unrestricted_reach(inst);
        inst.stages = static_cast<int>(plain.stats.nodes);
        CHECK(solve_bsr(inst).verdict.reachable() == unrestricted_reach(inst).reachable());
    }
}

TEST_CASE("jsonl certificates carry stage counters") {
    auto inst = test::bsr_from(kTwoWriters);
    inst.stages = 2;
    const auto r = solve_bsr(inst);
    REQUIRE(r.trace);
    const auto text = trace_to_jsonl(*r.trace, inst);
    CHECK(text.find("\"stage\":2") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.trace->size()));
}

TEST_CASE("state budget") {
    const auto inst = random_bsr({3, 4, 3, 2}, 3);
    BsrOptions o;
    o.max_states = 1;
    o.engine = BsrEngine::Product;
    const auto r = solve_bsr(inst, o);
    CHECK((r.verdict.outcome == Outcome::BudgetExceeded || r.verdict.stats.nodes <= 1));
}
