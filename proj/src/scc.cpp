#include "shmv/scc.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <unordered_set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/topological_sort.hpp>

#include "analysis.hpp"

namespace shmv {

using detail::Bits;
using detail::bit;
using detail::SymMask;

namespace {

struct Budget {};

SymMask prefix_mask(const std::vector<int>& r, int i) {
    SymMask S = 0;
    for (int k = 0; k < i; ++k) S |= bit(r[k]);
    return S;
}

int lowest(std::uint64_t m) { return __builtin_ctzll(m); }

} // namespace

Thread restricted_leader(const Thread& leader, const std::vector<int>& r, int i) {
    const SymMask S = prefix_mask(r, i);
    std::vector<Transition> kept;
    for (const auto& t : leader.transitions())
        if (detail::restricted_allows(t, S)) kept.push_back(t);
    return Thread(leader.name(), leader.state_names(), leader.initial(), std::move(kept));
}

SccDepth scc_depth(const Thread& leader, const std::vector<int>& r) {
    const int n = leader.size();
    SccDepth out;
    std::vector<std::vector<int>> node_of(r.size() + 1);
    for (std::size_t i = 0; i <= r.size(); ++i) {
        const SymMask S = prefix_mask(r, static_cast<int>(i));
        std::vector<std::pair<int, int>> edges;
        for (const auto& t : leader.transitions())
            if (detail::restricted_allows(t, S)) edges.emplace_back(t.from, t.to);
        int nc = 0;
        auto comp = detail::strong_components(n, edges, nc);
        const int base = static_cast<int>(out.graph.nodes.size());
        out.graph.nodes.resize(base + nc, SccGraph::Node{static_cast<int>(i), 0});
        node_of[i].resize(n);
        for (int q = 0; q < n; ++q) {
            node_of[i][q] = base + comp[q];
            out.graph.nodes[base + comp[q]].states |= std::uint64_t{1} << q;
        }
        for (const auto& [u, v] : edges)
            if (comp[u] != comp[v]) out.graph.edges.emplace_back(base + comp[u], base + comp[v]);
        if (i > 0)
            for (const auto& t : leader.transitions())
                if (t.op.kind == OpKind::Read && t.op.sym == r[i - 1])
                    out.graph.edges.emplace_back(node_of[i - 1][t.from], node_of[i][t.to]);
    }
    auto& e = out.graph.edges;
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());

    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    const int nn = static_cast<int>(out.graph.nodes.size());
    Graph g(nn);
    for (const auto& [u, v] : e) boost::add_edge(u, v, g);
    std::vector<int> order;
    boost::topological_sort(g, std::back_inserter(order)); // throws on a cycle
    std::vector<int> longest(nn, 1);
    for (auto it = order.begin(); it != order.end(); ++it) // reverse topological
        for (auto [ei, ee] = boost::out_edges(*it, g); ei != ee; ++ei)
            longest[*it] = std::max(longest[*it], 1 + longest[boost::target(*ei, g)]);
    out.depth = nn == 0 ? 0 : *std::max_element(longest.begin(), longest.end());
    return out;
}

SccValidity check_scc_validity(const SccCandidate& w, const LcrInstance& inst) {
    using K = SccLetter::Kind;
    if (inst.domain_size() > 64 || inst.leader.size() > 64 || inst.contributors.size() != 1)
        throw std::invalid_argument("unsupported instance size for SCC witnesses");
    detail::LeaderCache leaders(inst);

    // Shape and first-write sets.
    if (w.empty() || w.back().kind != K::Scc) throw ShapeError("candidate must end in an SCC");
    if (w.size() >= 2 && w[w.size() - 2].kind != K::FirstWrite)
        throw ShapeError("final SCC must directly follow a first write or start the word");
    std::vector<SymMask> fw(w.size());
    SymMask S = 0;
    int bars = 0;
    bool expect_connector = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& l = w[i];
        switch (l.kind) {
        case K::FirstWrite:
            if (expect_connector) throw ShapeError("first write directly after an SCC");
            if (l.value < 0 || l.value >= inst.domain_size()) throw ShapeError("symbol out of range");
            if (S & bit(l.value)) throw ShapeError("first-write word repeats a symbol");
            S |= bit(l.value);
            ++bars;
            break;
        case K::Scc: {
            if (expect_connector) throw ShapeError("SCC follows an SCC");
            if (l.level != bars) throw ShapeError("SCC level does not match the preceding first writes");
            if (l.states == 0) throw ShapeError("empty SCC");
            const auto& v = leaders.view(S);
            if (v.members[v.comp[lowest(l.states)]] != l.states)
                throw ShapeError("letter is not an SCC of the restricted leader");
            expect_connector = i + 1 < w.size();
            break;
        }
        case K::Symbol:
        case K::Bottom:
            if (!expect_connector) throw ShapeError("connector without a preceding SCC");
            if (l.kind == K::Symbol && (l.value < 0 || l.value >= inst.domain_size()))
                throw ShapeError("symbol out of range");
            expect_connector = false;
            break;
        }
        fw[i] = S;
    }

    // (1) leader connectivity
    const Thread& L = inst.leader;
    int prev = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].kind != K::Scc) continue;
        if (prev < 0) {
            if (!(w[i].states >> L.initial() & 1)) return SccValidity::NoLeaderRun;
        } else {
            const auto& conn = w[static_cast<std::size_t>(prev) + 1];
            const SymMask Sx = fw[static_cast<std::size_t>(prev) + 1];
            bool ok = false;
            for (const auto& t : L.transitions()) {
                if (!(w[static_cast<std::size_t>(prev)].states >> t.from & 1) || !(w[i].states >> t.to & 1)) continue;
                if (conn.kind == K::Symbol)
                    ok |= t.op.kind == OpKind::Write && t.op.sym == conn.value;
                else
                    ok |= t.op.kind == OpKind::Eps || (t.op.kind == OpKind::Read && (Sx & bit(t.op.sym)));
            }
            if (!ok) return SccValidity::NoLeaderRun;
        }
        prev = static_cast<int>(i);
    }
    if (!(leaders.view(fw.back()).back & w.back().states)) return SccValidity::NoLeaderRun;

    // (3) no SCC repeats inside a block
    {
        std::uint64_t used = 0;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (w[i].kind == K::FirstWrite) used = 0;
            if (w[i].kind != K::Scc) continue;
            if (used & w[i].states) return SccValidity::RepeatedScc;
            used |= w[i].states;
        }
    }

    // (2) contributor support, as for plain witnesses with SCC positions
    // serving every symbol written inside the SCC.
    const Thread& C = inst.contributors.front();
    const int nc = C.size();
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j].kind != K::FirstWrite) continue;
        const int npos = static_cast<int>(j) + 1;
        auto id = [&](int p, int pos, int clean) { return (pos * nc + p) * 2 + clean; };
        std::vector<bool> vis(static_cast<std::size_t>(npos) * nc * 2, false);
        std::deque<std::array<int, 3>> queue;
        auto push = [&](int p, int pos, int clean) {
            if (!vis[id(p, pos, clean)]) {
                vis[id(p, pos, clean)] = true;
                queue.push_back({p, pos, clean});
            }
        };
        push(C.initial(), 0, 1);
        bool supported = false;
        while (!queue.empty() && !supported) {
            auto [p, pos, clean] = queue.front();
            queue.pop_front();
            const SymMask Sp = pos == 0 ? 0 : fw[pos - 1];
            int literal = -1;
            SymMask inner = 0;
            if (pos == 0) literal = inst.init_sym;
            else if (w[pos - 1].kind == K::Symbol) literal = w[pos - 1].value;
            else if (w[pos - 1].kind == K::Scc) {
                const auto& v = leaders.view(Sp);
                inner = v.inner_writes[v.comp[lowest(w[pos - 1].states)]];
            }
            for (const auto& t : C.out(p)) {
                switch (t.op.kind) {
                case OpKind::Eps: push(t.to, pos, clean); break;
                case OpKind::Write:
                    if (t.op.sym == w[j].value) supported = true;
                    push(t.to, pos, 0);
                    break;
                case OpKind::Read:
                    if (clean && t.op.sym == literal) push(t.to, pos, 1);
                    else if (inner & bit(t.op.sym)) push(t.to, pos, clean);
                    else if (Sp & bit(t.op.sym)) push(t.to, pos, 0);
                    break;
                }
            }
            if (pos + 1 < npos) push(p, pos + 1, 1);
        }
        if (!supported) return SccValidity::NoSupport;
    }
    return SccValidity::Valid;
}

namespace {

class SccSearch {
public:
    SccSearch(const LcrInstance& inst, const SolverOptions& opts)
        : inst_(inst), leaders_(inst), fr_(inst.contributors.front()), opts_(opts) {}

    std::optional<SccCandidate> run() {
        const Bits f0 = fr_.initial(inst_.contributors.front().initial(), inst_.init_sym);
        if (dfs(std::uint64_t{1} << inst_.leader.initial(), 0, 0, true, f0)) return word_;
        return std::nullopt;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    struct Key {
        std::uint64_t targets;
        std::uint64_t used;
        SymMask S;
        bool after_bar;
        Bits F;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = boost::hash_value(k.F);
            auto mix = [&](std::uint64_t v) { h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
            mix(k.targets);
            mix(k.used);
            mix(k.S);
            mix(k.after_bar);
            return h;
        }
    };

    bool dfs(std::uint64_t targets, std::uint64_t used, SymMask S, bool after_bar, const Bits& F) {
        if (++nodes_ > opts_.max_nodes) throw Budget{};
        Key key{targets, used, S, after_bar, F};
        if (failed_.count(key)) return false;
        const Thread& L = inst_.leader;
        const auto& view = leaders_.view(S);
        const int level = __builtin_popcountll(S);

        // SCCs in order of their smallest state.
        for (std::size_t c = 0; c < view.members.size(); ++c) {
            const std::uint64_t X = view.members[c];
            if (!(X & targets)) continue;
            if (after_bar && (view.back & X)) {
                word_.push_back(SccLetter{SccLetter::Kind::Scc, -1, X, level});
                return true;
            }
            if (X & used) continue;
            const Bits F1 = fr_.open(F, S | view.inner_writes[c]);
            word_.push_back(SccLetter{SccLetter::Kind::Scc, -1, X, level});
            for (int x = 0; x <= inst_.domain_size(); ++x) {
                const bool bottom = x == inst_.domain_size();
                std::uint64_t next = 0;
                for (const auto& t : L.transitions()) {
                    if (!(X >> t.from & 1)) continue;
                    bool ok = bottom ? (t.op.kind == OpKind::Eps ||
                                        (t.op.kind == OpKind::Read && (S & bit(t.op.sym))))
                                     : (t.op.kind == OpKind::Write && t.op.sym == x);
                    if (ok) next |= std::uint64_t{1} << t.to;
                }
                if (!next) continue;
                const Bits F2 = bottom ? fr_.open(F1, S) : fr_.literal(F1, x, S);
                word_.push_back(bottom ? SccLetter{SccLetter::Kind::Bottom, -1, 0, 0}
                                       : SccLetter{SccLetter::Kind::Symbol, x, 0, 0});
                if (dfs(next, used | X, S, false, F2)) return true;
                word_.pop_back();
            }
            word_.pop_back();
        }

        for (int a = 0; a < inst_.domain_size(); ++a) {
            if ((S & bit(a)) || !fr_.can_write(F, a)) continue;
            const SymMask S1 = S | bit(a);
            word_.push_back(SccLetter{SccLetter::Kind::FirstWrite, a, 0, 0});
            if (dfs(targets, 0, S1, true, fr_.open(F, S1))) return true;
            word_.pop_back();
        }
        failed_.insert(std::move(key));
        return false;
    }

    const LcrInstance& inst_;
    detail::LeaderCache leaders_;
    detail::Frontier fr_;
    SolverOptions opts_;
    std::uint64_t nodes_ = 0;
    SccCandidate word_;
    std::unordered_set<Key, KeyHash> failed_;
};

} // namespace

SccResult solve_lcr_scc(const LcrInstance& inst, const SolverOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    SccResult res;
    res.normalized = prepare_for_witness(inst);
    if (res.normalized.domain_size() > 64 || res.normalized.leader.size() > 64)
        throw std::invalid_argument("SCC solver supports at most 64 symbols and 64 leader states");
    SccSearch search(res.normalized, opts);
    try {
        res.witness = search.run();
        res.verdict.outcome = res.witness ? Outcome::Reachable : Outcome::Unreachable;
        if (res.witness) res.verdict.certificate = scc_tokens(*res.witness, res.normalized);
    } catch (const Budget&) {
        res.verdict.outcome = Outcome::BudgetExceeded;
        res.verdict.note = "node cap reached";
    }
    res.verdict.stats.nodes = search.nodes();
    res.verdict.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::vector<std::string> scc_tokens(const SccCandidate& w, const LcrInstance& inst) {
    using K = SccLetter::Kind;
    std::vector<std::string> out;
    for (const auto& l : w) {
        switch (l.kind) {
        case K::Scc: {
            std::string s = "scc:{";
            bool first = true;
            for (int q = 0; q < inst.leader.size(); ++q)
                if (l.states >> q & 1) {
                    if (!first) s += ",";
                    s += inst.leader.state_name(q);
                    first = false;
                }
            out.push_back(s + "}@" + std::to_string(l.level));
            break;
        }
        case K::Symbol: out.push_back(inst.domain.at(l.value)); break;
        case K::Bottom: out.emplace_back("_"); break;
        case K::FirstWrite: out.push_back("~" + inst.domain.at(l.value)); break;
        }
    }
    return out;
}

SccCandidate parse_scc_witness(const std::vector<std::string>& tokens, const LcrInstance& inst) {
    auto symbol = [&](const std::string& s) {
        auto it = std::find(inst.domain.begin(), inst.domain.end(), s);
        if (it == inst.domain.end()) throw SemanticError("unknown symbol", s);
        return static_cast<int>(it - inst.domain.begin());
    };
    SccCandidate w;
    for (const auto& tok : tokens) {
        if (tok == "_") {
            w.push_back({SccLetter::Kind::Bottom, -1, 0, 0});
        } else if (tok.rfind("scc:{", 0) == 0) {
            auto close = tok.find("}@");
            if (close == std::string::npos) throw SemanticError("malformed SCC token", tok);
            std::uint64_t mask = 0;
            std::string body = tok.substr(5, close - 5);
            std::size_t pos = 0;
            while (pos <= body.size() && !body.empty()) {
                auto comma = body.find(',', pos);
                std::string name = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                auto q = inst.leader.find_state(name);
                if (!q) throw SemanticError("unknown state", name);
                mask |= std::uint64_t{1} << *q;
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            w.push_back({SccLetter::Kind::Scc, -1, mask, std::stoi(tok.substr(close + 2))});
        } else if (!tok.empty() && tok[0] == '~') {
            w.push_back({SccLetter::Kind::FirstWrite, symbol(tok.substr(1)), 0, 0});
        } else {
            w.push_back({SccLetter::Kind::Symbol, symbol(tok), 0, 0});
        }
    }
    return w;
}

} // namespace shmv
