// Bounded-stage reachability: a computation is split into at most s stages,
// each of which has a single writing thread.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shmv/model.hpp"

namespace shmv {

struct TraceStep {
    bool boundary = false; // a new stage opens; thread is its writer
    int thread = 0;
    MemoryOp op;
    Configuration after; // unused for boundaries
};

using StageTrace = std::vector<TraceStep>;

struct TraceCheck {
    bool ok = true;
    int failed_step = -1;
    std::string reason;
};

[[nodiscard]] TraceCheck check_stage_trace(const StageTrace& trace, const BsrInstance& inst);

// Product explores Q_1 x ... x Q_t x writer x stages x D literally. ReaderSets
// keeps a concrete state only for the active writer; every other thread is
// the set of states it can occupy given the memory history, which is exact
// because non-writers only read.
enum class BsrEngine { Product, ReaderSets };

struct BsrOptions {
    std::uint64_t max_states = 20'000'000;
    bool certificate = true;
    BsrEngine engine = BsrEngine::ReaderSets;
};

struct BsrResult {
    Verdict verdict;
    std::optional<StageTrace> trace;
};

[[nodiscard]] BsrResult solve_bsr(const BsrInstance& inst, const BsrOptions& opts = {});

// Plain reachability of the target, ignoring stages.
[[nodiscard]] Verdict unrestricted_reach(const BsrInstance& inst, std::uint64_t max_states = 20'000'000);

// P^t * (t+1) * (s+1) * |D| with P the largest thread.
[[nodiscard]] double product_state_bound(const BsrInstance& inst);

// One JSON object per line, each carrying a "stage" counter.
[[nodiscard]] std::string trace_to_jsonl(const StageTrace& trace, const BsrInstance& inst);

} // namespace shmv
