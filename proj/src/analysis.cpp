#include "analysis.hpp"

#include <algorithm>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

namespace shmv::detail {

std::vector<int> strong_components(int n, const std::vector<std::pair<int, int>>& edges, int& ncomp) {
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    Graph g(n);
    for (const auto& [u, v] : edges) boost::add_edge(u, v, g);
    std::vector<int> raw(n);
    ncomp = n == 0 ? 0 : boost::strong_components(g, raw.data());
    // Renumber by first occurrence.
    std::vector<int> remap(ncomp, -1), comp(n);
    int next = 0;
    for (int q = 0; q < n; ++q) {
        if (remap[raw[q]] < 0) remap[raw[q]] = next++;
        comp[q] = remap[raw[q]];
    }
    return comp;
}

bool restricted_allows(const Transition& t, SymMask S) {
    return t.op.kind != OpKind::Read || (S & bit(t.op.sym));
}

LeaderCache::LeaderCache(const LcrInstance& inst) : inst_(inst) {}

const LeaderView& LeaderCache::view(SymMask S) {
    auto it = cache_.find(S);
    if (it != cache_.end()) return it->second;

    const Thread& L = inst_.leader;
    const int n = L.size();
    std::vector<std::pair<int, int>> edges;
    for (const auto& t : L.transitions())
        if (restricted_allows(t, S)) edges.emplace_back(t.from, t.to);

    LeaderView v;
    int nc = 0;
    v.comp = strong_components(n, edges, nc);
    v.members.assign(nc, 0);
    v.inner_writes.assign(nc, 0);
    for (int q = 0; q < n; ++q) v.members[v.comp[q]] |= std::uint64_t{1} << q;
    for (const auto& t : L.transitions())
        if (t.op.kind == OpKind::Write && v.comp[t.from] == v.comp[t.to])
            v.inner_writes[v.comp[t.from]] |= bit(t.op.sym);

    for (int q : inst_.unsafe) v.back |= std::uint64_t{1} << q;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [u, w] : edges)
            if ((v.back >> w & 1) && !(v.back >> u & 1)) {
                v.back |= std::uint64_t{1} << u;
                grew = true;
            }
    }
    return cache_.emplace(S, std::move(v)).first->second;
}

Frontier::Frontier(const Thread& contributor) : n_(contributor.size()), out_(n_) {
    for (const auto& t : contributor.transitions()) out_[t.from].emplace_back(t.op, t.to);
}

Bits Frontier::closure(Bits f, SymMask reads, bool writes) const {
    std::vector<int> work;
    for (auto p = f.find_first(); p != Bits::npos; p = f.find_next(p)) work.push_back(static_cast<int>(p));
    while (!work.empty()) {
        int p = work.back();
        work.pop_back();
        for (const auto& [op, to] : out_[p]) {
            bool ok = op.kind == OpKind::Eps || (op.kind == OpKind::Write && writes) ||
                      (op.kind == OpKind::Read && (reads & bit(op.sym)));
            if (ok && !f.test(to)) {
                f.set(to);
                work.push_back(to);
            }
        }
    }
    return f;
}

Bits Frontier::initial(int start, int a0) const {
    Bits f(n_);
    f.set(start);
    return literal(f, a0, 0);
}

bool Frontier::can_write(const Bits& f, int a) const {
    for (auto p = f.find_first(); p != Bits::npos; p = f.find_next(p))
        for (const auto& [op, to] : out_[p])
            if (op.kind == OpKind::Write && op.sym == a) return true;
    return false;
}

} // namespace shmv::detail
