#include "shmv/witness.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <set>
#include <unordered_set>

#include "analysis.hpp"

namespace shmv {

using detail::Bits;
using detail::bit;
using detail::SymMask;

namespace {

struct Budget {};

void require_small(const LcrInstance& inst) {
    if (inst.domain_size() > 64) throw std::invalid_argument("witness solvers support at most 64 symbols");
    if (inst.leader.size() > 64) throw std::invalid_argument("witness solvers support at most 64 leader states");
    if (inst.contributors.size() != 1) throw std::invalid_argument("expected a single contributor template");
}

} // namespace

std::vector<std::uint64_t> first_write_sets(const WitnessCandidate& w) {
    std::vector<std::uint64_t> out(w.size());
    std::uint64_t cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].kind == WitnessLetter::Kind::FirstWrite) cur |= bit(w[i].value);
        out[i] = cur;
    }
    return out;
}

std::uint64_t loop_letters(const LcrInstance& inst, int q, std::uint64_t S) {
    detail::LeaderCache cache(inst);
    return cache.loop(q, S);
}

void check_shape(const WitnessCandidate& w, const LcrInstance& inst) {
    using K = WitnessLetter::Kind;
    const int nd = inst.domain_size();
    const int nl = inst.leader.size();
    if (w.empty() || w.back().kind != K::State) throw ShapeError("candidate must end in a leader state");
    bool expect_connector = false;
    int bars = 0;
    std::vector<bool> in_block(nl, false);
    int pairs = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& l = w[i];
        switch (l.kind) {
        case K::State:
            if (expect_connector) throw ShapeError("state follows a state at position " + std::to_string(i));
            if (l.value < 0 || l.value >= nl) throw ShapeError("leader state out of range");
            if (i + 1 == w.size()) break;
            if (in_block[l.value]) throw ShapeError("leader state repeats within a block");
            in_block[l.value] = true;
            ++pairs;
            expect_connector = true;
            break;
        case K::Symbol:
        case K::Bottom:
            if (!expect_connector) throw ShapeError("connector without a preceding state at position " + std::to_string(i));
            if (l.kind == K::Symbol && (l.value < 0 || l.value >= nd)) throw ShapeError("symbol out of range");
            expect_connector = false;
            if (i + 1 < w.size() && w[i + 1].kind != K::State && w[i + 1].kind != K::FirstWrite)
                throw ShapeError("connector must be followed by a state or a first write");
            break;
        case K::FirstWrite:
            if (expect_connector) throw ShapeError("first write directly after a state");
            if (l.value < 0 || l.value >= nd) throw ShapeError("symbol out of range");
            ++bars;
            std::fill(in_block.begin(), in_block.end(), false);
            pairs = 0;
            break;
        }
        if (pairs > nl) throw ShapeError("block longer than the leader");
    }
    if (bars > nd) throw ShapeError("more first writes than symbols");
    // The last block must be closed by a first write.
    if (w.size() >= 2 && w[w.size() - 2].kind != K::FirstWrite)
        throw ShapeError("final state must directly follow a first write or start the word");
}

Validity check_validity(const WitnessCandidate& w, const LcrInstance& inst) {
    using K = WitnessLetter::Kind;
    require_small(inst);
    check_shape(w, inst);
    const auto fw = first_write_sets(w);

    // (1) unique first writes
    SymMask seen = 0;
    for (const auto& l : w)
        if (l.kind == K::FirstWrite) {
            if (seen & bit(l.value)) return Validity::RepeatedFirstWrite;
            seen |= bit(l.value);
        }

    // (2) leader run
    const Thread& L = inst.leader;
    int prev = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& l = w[i];
        if (l.kind != K::State) continue;
        if (prev < 0) {
            if (l.value != L.initial()) return Validity::NoLeaderRun;
        } else {
            const auto& conn = w[static_cast<std::size_t>(prev) + 1];
            const int from = w[static_cast<std::size_t>(prev)].value;
            const SymMask S = fw[static_cast<std::size_t>(prev) + 1];
            bool ok = false;
            for (const auto& t : L.out(from)) {
                if (t.to != l.value) continue;
                if (conn.kind == K::Symbol)
                    ok |= t.op.kind == OpKind::Write && t.op.sym == conn.value;
                else
                    ok |= t.op.kind == OpKind::Eps || (t.op.kind == OpKind::Read && (S & bit(t.op.sym)));
            }
            if (!ok) return Validity::NoLeaderRun;
        }
        prev = static_cast<int>(i);
    }
    detail::LeaderCache leaders(inst);
    if (!(leaders.view(fw.back()).back >> w.back().value & 1)) return Validity::NoLeaderRun;

    // (3) supportive contributor computations, one product search per bar.
    // Product states are (contributor state, position, clean flag); position 0
    // is the initial memory content.
    const Thread& C = inst.contributors.front();
    const int nc = C.size();
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j].kind != K::FirstWrite) continue;
        const int npos = static_cast<int>(j) + 1; // positions 0..j
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
            const SymMask S = pos == 0 ? 0 : fw[pos - 1];
            int literal = -1;
            SymMask loops = 0;
            if (pos == 0) literal = inst.init_sym;
            else if (w[pos - 1].kind == K::Symbol) literal = w[pos - 1].value;
            else if (w[pos - 1].kind == K::State) loops = leaders.loop(w[pos - 1].value, S);
            for (const auto& t : C.out(p)) {
                switch (t.op.kind) {
                case OpKind::Eps: push(t.to, pos, clean); break;
                case OpKind::Write:
                    if (t.op.sym == w[j].value) supported = true;
                    push(t.to, pos, 0);
                    break;
                case OpKind::Read:
                    if (clean && t.op.sym == literal) push(t.to, pos, 1);
                    else if (loops & bit(t.op.sym)) push(t.to, pos, clean);
                    else if (S & bit(t.op.sym)) push(t.to, pos, 0);
                    break;
                }
            }
            if (pos + 1 < npos) push(p, pos + 1, 1);
        }
        if (!supported) return Validity::NoSupport;
    }
    return Validity::Valid;
}

LcrInstance prepare_for_witness(const LcrInstance& inst) {
    LcrInstance merged = inst;
    if (merged.contributors.size() > 1) merged.contributors = {merge_contributors(inst.contributors)};
    return normalize_leader(merged);
}

namespace {

class WitnessSearch {
public:
    WitnessSearch(const LcrInstance& inst, const SolverOptions& opts)
        : inst_(inst), leaders_(inst), fr_(inst.contributors.front()), opts_(opts) {}

    std::optional<WitnessCandidate> run() {
        const Bits f0 = fr_.initial(inst_.contributors.front().initial(), inst_.init_sym);
        if (dfs(inst_.leader.initial(), 0, 0, true, f0)) return word_;
        return std::nullopt;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    struct Key {
        int pending;
        std::uint64_t mask;
        SymMask S;
        bool after_bar;
        Bits F;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = boost::hash_value(k.F);
            auto mix = [&](std::uint64_t v) { h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
            mix(static_cast<std::uint64_t>(k.pending));
            mix(k.mask);
            mix(k.S);
            mix(k.after_bar);
            return h;
        }
    };

    bool dfs(int pending, std::uint64_t mask, SymMask S, bool after_bar, const Bits& F) {
        if (++nodes_ > opts_.max_nodes) throw Budget{};
        Key key{pending, mask, S, after_bar, F};
        if (failed_.count(key)) return false;
        const Thread& L = inst_.leader;
        const auto& view = leaders_.view(S);

        if (after_bar && (view.back >> pending & 1)) {
            word_.push_back(WitnessLetter::state(pending));
            return true;
        }

        if (!(mask >> pending & 1)) {
            const Bits F1 = fr_.open(F, S | view.inner_writes[view.comp[pending]]);
            word_.push_back(WitnessLetter::state(pending));
            const std::uint64_t mask1 = mask | std::uint64_t{1} << pending;
            for (int a = 0; a < inst_.domain_size(); ++a) {
                std::set<int> targets;
                for (const auto& t : L.out(pending))
                    if (t.op.kind == OpKind::Write && t.op.sym == a) targets.insert(t.to);
                if (targets.empty()) continue;
                const Bits F2 = fr_.literal(F1, a, S);
                word_.push_back(WitnessLetter::symbol(a));
                for (int q : targets)
                    if (dfs(q, mask1, S, false, F2)) return true;
                word_.pop_back();
            }
            std::set<int> targets;
            for (const auto& t : L.out(pending))
                if (t.op.kind == OpKind::Eps || (t.op.kind == OpKind::Read && (S & bit(t.op.sym))))
                    targets.insert(t.to);
            if (!targets.empty()) {
                const Bits F2 = fr_.open(F1, S);
                word_.push_back(WitnessLetter::bottom());
                for (int q : targets)
                    if (dfs(q, mask1, S, false, F2)) return true;
                word_.pop_back();
            }
            word_.pop_back();
        }

        for (int a = 0; a < inst_.domain_size(); ++a) {
            if ((S & bit(a)) || !fr_.can_write(F, a)) continue;
            const SymMask S1 = S | bit(a);
            word_.push_back(WitnessLetter::first_write(a));
            if (dfs(pending, 0, S1, true, fr_.open(F, S1))) return true;
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
    WitnessCandidate word_;
    std::unordered_set<Key, KeyHash> failed_;
};

} // namespace

WitnessResult solve_lcr_witness(const LcrInstance& inst, const SolverOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    WitnessResult res;
    res.normalized = prepare_for_witness(inst);
    require_small(res.normalized);
    WitnessSearch search(res.normalized, opts);
    try {
        res.witness = search.run();
        res.verdict.outcome = res.witness ? Outcome::Reachable : Outcome::Unreachable;
        if (res.witness) res.verdict.certificate = witness_tokens(*res.witness, res.normalized);
    } catch (const Budget&) {
        res.verdict.outcome = Outcome::BudgetExceeded;
        res.verdict.note = "node cap reached";
    }
    res.verdict.stats.nodes = search.nodes();
    res.verdict.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::vector<std::string> witness_tokens(const WitnessCandidate& w, const LcrInstance& inst) {
    using K = WitnessLetter::Kind;
    std::vector<std::string> out;
    for (const auto& l : w) {
        switch (l.kind) {
        case K::State: out.push_back(inst.leader.state_name(l.value)); break;
        case K::Symbol: out.push_back(inst.domain.at(l.value)); break;
        case K::Bottom: out.emplace_back("_"); break;
        case K::FirstWrite: out.push_back("~" + inst.domain.at(l.value)); break;
        }
    }
    return out;
}

WitnessCandidate parse_witness(const std::vector<std::string>& tokens, const LcrInstance& inst) {
    auto symbol = [&](const std::string& s) {
        auto it = std::find(inst.domain.begin(), inst.domain.end(), s);
        if (it == inst.domain.end()) throw SemanticError("unknown symbol", s);
        return static_cast<int>(it - inst.domain.begin());
    };
    WitnessCandidate w;
    bool expect_connector = false;
    for (const auto& tok : tokens) {
        if (expect_connector) {
            w.push_back(tok == "_" ? WitnessLetter::bottom() : WitnessLetter::symbol(symbol(tok)));
            expect_connector = false;
        } else if (!tok.empty() && tok[0] == '~') {
            w.push_back(WitnessLetter::first_write(symbol(tok.substr(1))));
        } else {
            auto q = inst.leader.find_state(tok);
            if (!q) throw SemanticError("unknown state", tok);
            w.push_back(WitnessLetter::state(*q));
            expect_connector = true;
        }
    }
    return w;
}

void enumerate_candidates(const LcrInstance& inst,
                          const std::function<bool(const WitnessCandidate&)>& visit) {
    const int nl = inst.leader.size();
    const int nd = inst.domain_size();
    WitnessCandidate w;
    bool stop = false;
    // block: extend the current block or close it with a bar; at a block
    // boundary the candidate may also end with a final state.
    std::function<void(std::uint64_t, SymMask, bool)> rec = [&](std::uint64_t used, SymMask bars, bool boundary) {
        if (stop) return;
        if (boundary)
            for (int q = 0; q < nl && !stop; ++q) {
                w.push_back(WitnessLetter::state(q));
                stop = !visit(w);
                w.pop_back();
            }
        for (int q = 0; q < nl && !stop; ++q) {
            if (used >> q & 1) continue;
            w.push_back(WitnessLetter::state(q));
            for (int x = 0; x <= nd && !stop; ++x) {
                w.push_back(x == nd ? WitnessLetter::bottom() : WitnessLetter::symbol(x));
                rec(used | std::uint64_t{1} << q, bars, false);
                w.pop_back();
            }
            w.pop_back();
        }
        for (int a = 0; a < nd && !stop; ++a) {
            if (bars & bit(a)) continue;
            w.push_back(WitnessLetter::first_write(a));
            rec(0, bars | bit(a), true);
            w.pop_back();
        }
    };
    rec(0, 0, true);
}

} // namespace shmv
