#include "shmv/dp.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <optional>
#include <set>
#include <tuple>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace shmv {

namespace {

StateSet sbit(int p) { return StateSet{1} << p; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string pair_name(const LcrInstance& inst, int q, int a) {
    return "(" + inst.leader.state_name(q) + "," + inst.domain.at(a) + ")";
}

// Precomputed pieces of the saturation graph shared by the DP passes.
class Saturation {
public:
    explicit Saturation(const LcrInstance& inst) : inst_(inst), contrib_(single_contributor(inst, storage_)) {
        nd_ = inst.domain_size();
        np_ = inst.leader.size() * nd_;
        if (contrib_.size() > 64) throw std::invalid_argument("at most 64 contributor states are supported");
        lead_.resize(np_);
        for (const auto& t : inst.leader.transitions()) {
            for (int a = 0; a < nd_; ++a) {
                const int from = t.from * nd_ + a;
                switch (t.op.kind) {
                case OpKind::Write: lead_[from].push_back(t.to * nd_ + t.op.sym); break;
                case OpKind::Read:
                    if (a == t.op.sym) lead_[from].push_back(t.to * nd_ + a);
                    break;
                case OpKind::Eps: lead_[from].push_back(t.to * nd_ + a); break;
                }
            }
        }
    }

    const Thread& contributor() const { return contrib_; }
    int pairs() const { return np_; }
    int nd() const { return nd_; }

    // Symbols a contributor can write without leaving S.
    std::uint64_t inner_writes(StateSet S) const {
        std::uint64_t m = 0;
        for (const auto& t : contrib_.transitions())
            if (t.op.kind == OpKind::Write && (S >> t.from & 1) && (S >> t.to & 1)) m |= std::uint64_t{1} << t.op.sym;
        return m;
    }

    // Forward closure at a fixed level; parent[i] gets the predecessor pair
    // (-1 for seeds) when requested.
    void close(PairSet& in, StateSet S, std::vector<int>* parent = nullptr) const {
        const std::uint64_t w = inner_writes(S);
        std::vector<int> work;
        for (int i = 0; i < np_; ++i)
            if (in[i]) work.push_back(i);
        auto visit = [&](int from, int to) {
            if (!in[to]) {
                in[to] = true;
                if (parent) (*parent)[to] = from;
                work.push_back(to);
            }
        };
        while (!work.empty()) {
            const int i = work.back();
            work.pop_back();
            for (int j : lead_[i]) visit(i, j);
            if (w)
                for (int b = 0; b < nd_; ++b)
                    if (w >> b & 1) visit(i, (i / nd_) * nd_ + b);
        }
    }

    // Pairs at level W | p entered from pair i at level W through t.
    template <class F>
    void cross(int i, const Transition& t, F&& emit) const {
        const int a = i % nd_;
        switch (t.op.kind) {
        case OpKind::Write: emit((i / nd_) * nd_ + t.op.sym); break;
        case OpKind::Read:
            if (a == t.op.sym) emit(i);
            break;
        case OpKind::Eps: emit(i); break;
        }
    }

    bool hits(const PairSet& s) const {
        for (int i = 0; i < np_; ++i)
            if (s[i] && inst_.is_unsafe(i / nd_)) return true;
        return false;
    }

private:
    const LcrInstance& inst_;
    Thread storage_;
    const Thread& contrib_;
    int nd_ = 0;
    int np_ = 0;
    std::vector<std::vector<int>> lead_;
};

std::vector<std::string> reconstruct(const LcrInstance& inst, const Saturation& sat, const ReachTable& table,
                                     StateSet S, int target) {
    const Thread& C = sat.contributor();
    const StateSet base = sbit(C.initial());
    const int nd = sat.nd();
    std::vector<std::string> out{"end:" + pair_name(inst, target / nd, target % nd)};
    while (true) {
        PairSet in(sat.pairs(), false);
        std::vector<int> parent(sat.pairs(), -1);
        // origin[j] = (W, predecessor pair, added state) for seeds
        std::vector<std::tuple<StateSet, int, int>> origin(sat.pairs(), {0, -1, -1});
        if (S == base) {
            in[inst.leader.initial() * nd + inst.init_sym] = true;
        } else {
            for (const auto& t : C.transitions()) {
                const StateSet W = S & ~sbit(t.to);
                if (!(S >> t.to & 1) || W == S || !(W >> t.from & 1)) continue;
                auto it = table.entries.find(W);
                if (it == table.entries.end()) continue;
                for (int i = 0; i < sat.pairs(); ++i) {
                    if (!it->second[i]) continue;
                    sat.cross(i, t, [&](int j) {
                        if (!in[j]) {
                            in[j] = true;
                            origin[j] = {W, i, t.to};
                        }
                    });
                }
            }
        }
        sat.close(in, S, &parent);
        if (!in[target]) throw std::logic_error("dp certificate reconstruction failed");
        int seed = target;
        while (parent[seed] >= 0) seed = parent[seed];
        if (S == base) {
            out.push_back("start:" + pair_name(inst, seed / nd, seed % nd));
            break;
        }
        auto [W, pred, added] = origin[seed];
        out.push_back("+" + C.state_name(added) + ":" + pair_name(inst, seed / nd, seed % nd));
        S = W;
        target = pred;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace

bool ReachTable::contains(StateSet S, int q, int a) const {
    auto it = entries.find(S);
    return it != entries.end() && it->second[q * domain_size + a];
}

std::vector<std::pair<int, int>> ReachTable::pairs(StateSet S) const {
    std::vector<std::pair<int, int>> out;
    auto it = entries.find(S);
    if (it == entries.end()) return out;
    for (std::size_t i = 0; i < it->second.size(); ++i)
        if (it->second[i]) out.emplace_back(static_cast<int>(i) / domain_size, static_cast<int>(i) % domain_size);
    return out;
}

std::vector<SaturationNode> saturation_successors(const LcrInstance& inst, const Thread& contributor,
                                                  const SaturationNode& v) {
    std::vector<SaturationNode> out;
    for (const auto& t : inst.leader.out(v.q)) {
        if (t.op.kind == OpKind::Write) out.push_back({t.to, t.op.sym, v.set});
        else if (t.op.kind == OpKind::Eps || t.op.sym == v.mem) out.push_back({t.to, v.mem, v.set});
    }
    for (const auto& t : contributor.transitions()) {
        if (!(v.set >> t.from & 1)) continue;
        const StateSet S = v.set | sbit(t.to);
        if (t.op.kind == OpKind::Write) out.push_back({v.q, t.op.sym, S});
        else if (t.op.kind == OpKind::Eps || t.op.sym == v.mem) out.push_back({v.q, v.mem, S});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Slice build_slice(const LcrInstance& inst, StateSet W, int p) {
    Thread storage;
    const Thread& C = single_contributor(inst, storage);
    if (W >> p & 1) throw std::invalid_argument("build_slice: p already in W");
    Slice s{W, W | sbit(p), p, {}};
    for (StateSet level : {s.W, s.S})
        for (int q = 0; q < inst.leader.size(); ++q)
            for (int a = 0; a < inst.domain_size(); ++a) {
                SaturationNode v{q, a, level};
                for (const auto& u : saturation_successors(inst, C, v))
                    if (u.set == s.W || u.set == s.S) s.edges.emplace_back(v, u);
            }
    return s;
}

std::vector<std::pair<int, int>> reach_in_slice(const std::vector<std::pair<int, int>>& seed, const Slice& slice) {
    std::map<SaturationNode, std::vector<SaturationNode>> adj;
    for (const auto& [u, v] : slice.edges) adj[u].push_back(v);
    std::set<SaturationNode> seen;
    std::deque<SaturationNode> queue;
    for (const auto& [q, a] : seed) {
        SaturationNode v{q, a, slice.W};
        if (seen.insert(v).second) queue.push_back(v);
    }
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        auto it = adj.find(v);
        if (it == adj.end()) continue;
        for (const auto& u : it->second)
            if (seen.insert(u).second) queue.push_back(u);
    }
    std::vector<std::pair<int, int>> out;
    for (const auto& v : seen)
        if (v.set == slice.S) out.emplace_back(v.q, v.mem);
    return out;
}

DpResult solve_lcr_dp(const LcrInstance& inst, const DpOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    Saturation sat(inst);
    const Thread& C = sat.contributor();
    DpResult res;
    res.table.domain_size = inst.domain_size();

    const StateSet base = sbit(C.initial());
    std::unordered_map<StateSet, PairSet> layer;
    {
        PairSet s(sat.pairs(), false);
        s[inst.leader.initial() * sat.nd() + inst.init_sym] = true;
        layer.emplace(base, std::move(s));
    }
    std::optional<std::pair<StateSet, int>> hit;
    std::uint64_t processed = 0;
    bool budget = false;
    while (!layer.empty() && !budget && !(hit && !opts.full_table)) {
        std::vector<StateSet> order;
        order.reserve(layer.size());
        for (const auto& [S, _] : layer) order.push_back(S);
        std::sort(order.begin(), order.end());
        std::unordered_map<StateSet, PairSet> next;
        for (StateSet S : order) {
            if (++processed > opts.max_sets) {
                budget = true;
                break;
            }
            PairSet& cur = layer[S];
            sat.close(cur, S);
            if (std::find(cur.begin(), cur.end(), true) == cur.end()) continue;
            if (!hit && sat.hits(cur))
                for (int i = 0; i < sat.pairs(); ++i)
                    if (cur[i] && inst.is_unsafe(i / sat.nd())) {
                        hit = {S, i};
                        break;
                    }
            if (hit && !opts.full_table) {
                res.table.entries.emplace(S, cur);
                break;
            }
            for (const auto& t : C.transitions()) {
                if (!(S >> t.from & 1) || (S >> t.to & 1)) continue;
                const StateSet S1 = S | sbit(t.to);
                auto [it, fresh] = next.try_emplace(S1);
                if (fresh) it->second.assign(sat.pairs(), false);
                PairSet& dst = it->second;
                for (int i = 0; i < sat.pairs(); ++i)
                    if (cur[i]) sat.cross(i, t, [&](int j) { dst[j] = true; });
            }
            res.table.entries.emplace(S, std::move(cur));
        }
        layer = std::move(next);
    }

    res.verdict.stats.nodes = processed;
    if (hit) {
        res.verdict.outcome = Outcome::Reachable;
        if (opts.certificate) res.verdict.certificate = reconstruct(inst, sat, res.table, hit->first, hit->second);
    } else if (budget) {
        res.verdict.outcome = Outcome::BudgetExceeded;
        res.verdict.note = "table size cap reached";
    } else {
        res.verdict.outcome = Outcome::Unreachable;
    }
    res.verdict.stats.seconds = seconds_since(t0);
    return res;
}

std::string set_name(StateSet S, const Thread& contributor) {
    std::string s = "{";
    bool first = true;
    for (int p = 0; p < contributor.size(); ++p)
        if (S >> p & 1) {
            if (!first) s += ",";
            s += contributor.state_name(p);
            first = false;
        }
    return s + "}";
}

std::string dump_table(const ReachTable& table, const LcrInstance& inst) {
    Thread storage;
    const Thread& C = single_contributor(inst, storage);
    std::vector<StateSet> keys;
    for (const auto& [S, _] : table.entries) keys.push_back(S);
    auto rank = [](StateSet S) {
        std::vector<int> v;
        for (int p = 0; p < 64; ++p)
            if (S >> p & 1) v.push_back(p);
        return std::make_pair(v.size(), v);
    };
    std::sort(keys.begin(), keys.end(), [&](StateSet x, StateSet y) { return rank(x) < rank(y); });
    std::ostringstream os;
    for (StateSet S : keys) {
        os << "S=" << set_name(S, C) << " :";
        for (const auto& [q, a] : table.pairs(S)) os << " " << pair_name(inst, q, a);
        os << "\n";
    }
    return os.str();
}

ExplicitResult explicit_graph_reach(const LcrInstance& inst, const ExplicitOptions& opts, bool keep_nodes) {
    const auto t0 = std::chrono::steady_clock::now();
    Thread storage;
    const Thread& C = single_contributor(inst, storage);
    ExplicitResult res;
    if (C.size() > opts.max_contributor_states || C.size() > 64) {
        res.verdict.outcome = Outcome::BudgetExceeded;
        res.verdict.note = "contributor state cap exceeded";
        return res;
    }
    struct Hash {
        std::size_t operator()(const SaturationNode& v) const {
            return std::hash<std::uint64_t>{}(v.set * 0x9e3779b97f4a7c15ULL ^ (std::uint64_t(v.q) << 32 | unsigned(v.mem)));
        }
    };
    std::unordered_set<SaturationNode, Hash> seen;
    std::deque<SaturationNode> queue;
    SaturationNode v0{inst.leader.initial(), inst.init_sym, sbit(C.initial())};
    seen.insert(v0);
    queue.push_back(v0);
    bool found = false;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (inst.is_unsafe(v.q)) {
            found = true;
            if (!keep_nodes) break;
        }
        for (const auto& u : saturation_successors(inst, C, v))
            if (seen.insert(u).second) {
                if (seen.size() > opts.max_nodes) {
                    res.verdict.outcome = Outcome::BudgetExceeded;
                    res.verdict.note = "node cap reached";
                    res.verdict.stats.nodes = seen.size();
                    res.verdict.stats.seconds = seconds_since(t0);
                    return res;
                }
                queue.push_back(u);
            }
    }
    res.verdict.outcome = found ? Outcome::Reachable : Outcome::Unreachable;
    res.verdict.stats.nodes = seen.size();
    res.verdict.stats.seconds = seconds_since(t0);
    if (keep_nodes) {
        res.reached.assign(seen.begin(), seen.end());
        std::sort(res.reached.begin(), res.reached.end());
    }
    return res;
}

} // namespace shmv
