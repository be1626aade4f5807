// Saturation graph over (leader state, memory, set of contributor states) and
// the subset dynamic program deciding reachability on it.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shmv/model.hpp"

namespace shmv {

using StateSet = std::uint64_t; // contributor states, bit p = state p

struct SaturationNode {
    int q = 0;
    int mem = 0;
    StateSet set = 0;

    auto operator<=>(const SaturationNode&) const = default;
};

// Leader/memory pairs, encoded as q * |D| + a.
using PairSet = std::vector<bool>;

struct ReachTable {
    int domain_size = 0;
    std::map<StateSet, PairSet> entries; // non-empty entries only

    [[nodiscard]] bool contains(StateSet S, int q, int a) const;
    [[nodiscard]] std::vector<std::pair<int, int>> pairs(StateSet S) const;
};

struct Slice {
    StateSet W = 0;
    StateSet S = 0;
    int added = 0;
    std::vector<std::pair<SaturationNode, SaturationNode>> edges;
};

// One-step successors of a node in the saturation graph. contributor must be
// a single template.
[[nodiscard]] std::vector<SaturationNode> saturation_successors(const LcrInstance& inst,
                                                                const Thread& contributor,
                                                                const SaturationNode& v);

[[nodiscard]] Slice build_slice(const LcrInstance& inst, StateSet W, int p);

// Pairs reachable at level S from the given pairs at level W.
[[nodiscard]] std::vector<std::pair<int, int>> reach_in_slice(const std::vector<std::pair<int, int>>& seed,
                                                              const Slice& slice);

struct DpOptions {
    std::uint64_t max_sets = 20'000'000;
    bool full_table = false; // keep going after a hit, e.g. for dumping
    bool certificate = true;
};

struct DpResult {
    Verdict verdict;
    ReachTable table;
};

[[nodiscard]] DpResult solve_lcr_dp(const LcrInstance& inst, const DpOptions& opts = {});

// Lines "S={p0,p1} : (q1,a) (q1,c)" in order of set size, then state order.
[[nodiscard]] std::string dump_table(const ReachTable& table, const LcrInstance& inst);

struct ExplicitOptions {
    int max_contributor_states = 12;
    std::uint64_t max_nodes = 50'000'000;
};

struct ExplicitResult {
    Verdict verdict;
    std::vector<SaturationNode> reached; // filled when keep_nodes is set
};

[[nodiscard]] ExplicitResult explicit_graph_reach(const LcrInstance& inst, const ExplicitOptions& opts = {},
                                                  bool keep_nodes = false);

[[nodiscard]] std::string set_name(StateSet S, const Thread& contributor);

} // namespace shmv
