// Shared helpers for the witness-based solvers: leader views restricted to a
// set of readable symbols and contributor frontier closures.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "shmv/model.hpp"

namespace shmv::detail {

using Bits = boost::dynamic_bitset<std::uint64_t>;
using SymMask = std::uint64_t;

[[nodiscard]] inline SymMask bit(int i) { return SymMask{1} << i; }

struct BitsHash {
    std::size_t operator()(const Bits& b) const { return boost::hash_value(b); }
};

// Strongly connected components of a directed graph; component ids follow
// the smallest member state so that iteration order is deterministic.
[[nodiscard]] std::vector<int> strong_components(int n, const std::vector<std::pair<int, int>>& edges,
                                                 int& ncomp);

// The leader with reads restricted to a symbol set S.
struct LeaderView {
    std::vector<int> comp;               // state -> component id
    std::vector<std::uint64_t> members;  // component -> state mask
    std::vector<SymMask> inner_writes;   // component -> symbols written inside it
    std::uint64_t back = 0;              // states reaching an unsafe state
};

class LeaderCache {
public:
    explicit LeaderCache(const LcrInstance& inst);
    [[nodiscard]] const LeaderView& view(SymMask S);
    [[nodiscard]] SymMask loop(int q, SymMask S) { const auto& v = view(S); return v.inner_writes[v.comp[q]]; }

private:
    const LcrInstance& inst_;
    std::unordered_map<SymMask, LeaderView> cache_;
};

[[nodiscard]] bool restricted_allows(const Transition& t, SymMask S);

class Frontier {
public:
    explicit Frontier(const Thread& contributor);

    [[nodiscard]] int size() const { return n_; }
    [[nodiscard]] Bits closure(Bits f, SymMask reads, bool writes) const;

    // Position kinds of a candidate.
    [[nodiscard]] Bits initial(int start, int a0) const;
    [[nodiscard]] Bits literal(const Bits& f, int a, SymMask S) const {
        return closure(closure(f, bit(a), false), S, true);
    }
    [[nodiscard]] Bits open(const Bits& f, SymMask readable) const { return closure(f, readable, true); }
    [[nodiscard]] bool can_write(const Bits& f, int a) const;

private:
    int n_;
    std::vector<std::vector<std::pair<MemoryOp, int>>> out_;
};

} // namespace shmv::detail
