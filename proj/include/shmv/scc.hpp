// SCC witnesses: witness candidates whose leader part is factorized along the
// strongly connected components of the leader restricted by first writes.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shmv/model.hpp"
#include "shmv/witness.hpp"

namespace shmv {

struct SccLetter {
    enum class Kind : std::uint8_t { Scc, Symbol, Bottom, FirstWrite };
    Kind kind = Kind::Bottom;
    int value = -1;             // symbol for Symbol and FirstWrite
    std::uint64_t states = 0;   // member mask for Scc
    int level = 0;              // restriction level for Scc

    auto operator<=>(const SccLetter&) const = default;
};

using SccCandidate = std::vector<SccLetter>;

enum class SccValidity { Valid = 0, NoLeaderRun = 1, NoSupport = 2, RepeatedScc = 3 };

// Leader without the reads of symbols outside r[0..i).
[[nodiscard]] Thread restricted_leader(const Thread& leader, const std::vector<int>& r, int i);

struct SccGraph {
    struct Node {
        int level = 0;
        std::uint64_t states = 0;
    };
    std::vector<Node> nodes;
    std::vector<std::pair<int, int>> edges;
};

struct SccDepth {
    SccGraph graph;
    int depth = 0; // longest path, counted in nodes
};

[[nodiscard]] SccDepth scc_depth(const Thread& leader, const std::vector<int>& r);

// inst must be prepared with prepare_for_witness.
[[nodiscard]] SccValidity check_scc_validity(const SccCandidate& w, const LcrInstance& inst);

struct SccResult {
    Verdict verdict;
    std::optional<SccCandidate> witness;
    LcrInstance normalized;
};

[[nodiscard]] SccResult solve_lcr_scc(const LcrInstance& inst, const SolverOptions& opts = {});

[[nodiscard]] std::vector<std::string> scc_tokens(const SccCandidate& w, const LcrInstance& inst);
[[nodiscard]] SccCandidate parse_scc_witness(const std::vector<std::string>& tokens, const LcrInstance& inst);

} // namespace shmv
