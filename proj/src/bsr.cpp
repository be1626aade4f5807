#include "shmv/bsr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <boost/functional/hash.hpp>
#include <json.hpp>

namespace shmv {

namespace {

// pc..., writer + 1, stages, memory
using Key = std::vector<int>;

struct KeyHash {
    std::size_t operator()(const Key& k) const { return boost::hash_range(k.begin(), k.end()); }
};

struct Node {
    Key key;
    int parent = -1;
    TraceStep step;
};

Configuration config_of(const Key& k) {
    Configuration c;
    c.pc.assign(k.begin(), k.end() - 3);
    c.memory = k.back();
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BsrResult solve_product(const BsrInstance& inst, const BsrOptions& opts);
BsrResult solve_reader_sets(const BsrInstance& inst, const BsrOptions& opts);

} // namespace

BsrResult solve_bsr(const BsrInstance& inst, const BsrOptions& opts) {
    if (inst.program.threads.empty()) throw std::invalid_argument("BSR needs at least one thread");
    if (inst.stages < 0) throw std::invalid_argument("negative stage budget");
    return opts.engine == BsrEngine::Product ? solve_product(inst, opts) : solve_reader_sets(inst, opts);
}

namespace {

BsrResult solve_product(const BsrInstance& inst, const BsrOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const Program& prog = inst.program;
    const int t = static_cast<int>(prog.threads.size());
    BsrResult res;

    std::vector<Node> nodes;
    std::unordered_map<Key, int, KeyHash> index;
    {
        Key k0;
        for (const auto& th : prog.threads) k0.push_back(th.initial());
        k0.push_back(0);
        k0.push_back(0);
        k0.push_back(prog.init_sym);
        index.emplace(k0, 0);
        nodes.push_back({std::move(k0), -1, {}});
    }
    auto add = [&](Key k, int parent, TraceStep step) {
        if (index.count(k)) return;
        index.emplace(k, static_cast<int>(nodes.size()));
        nodes.push_back({std::move(k), parent, std::move(step)});
    };

    int found = -1;
    bool budget = false;
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        const Key cur = nodes[head].key;
        const Configuration c = config_of(cur);
        if (inst.in_target(c)) {
            found = static_cast<int>(head);
            break;
        }
        if (nodes.size() > opts.max_states) {
            budget = true;
            break;
        }
        const int writer = cur[t] - 1;
        const int stages = cur[t + 1];
        for (int i = 0; i < t; ++i) {
            for (const auto& tr : prog.threads[i].out(c.pc[i])) {
                if (tr.op.kind == OpKind::Read && tr.op.sym != c.memory) continue;
                if (tr.op.kind == OpKind::Write && i != writer) continue;
                Key k = cur;
                k[i] = tr.to;
                if (tr.op.kind == OpKind::Write) k.back() = tr.op.sym;
                TraceStep st{false, i, tr.op, config_of(k)};
                add(std::move(k), static_cast<int>(head), std::move(st));
            }
        }
        if (stages < inst.stages)
            for (int m = 0; m < t; ++m) {
                Key k = cur;
                k[t] = m + 1;
                k[t + 1] = stages + 1;
                add(std::move(k), static_cast<int>(head), TraceStep{true, m, MemoryOp::eps(), c});
            }
    }

    res.verdict.stats.nodes = nodes.size();
    if (found >= 0) {
        res.verdict.outcome = Outcome::Reachable;
        if (opts.certificate) {
            StageTrace trace;
            for (int v = found; nodes[v].parent >= 0; v = nodes[v].parent) trace.push_back(nodes[v].step);
            std::reverse(trace.begin(), trace.end());
            res.verdict.certificate = {trace_to_jsonl(trace, inst)};
            res.trace = std::move(trace);
        }
    } else if (budget) {
        res.verdict.outcome = Outcome::BudgetExceeded;
        res.verdict.note = "product state cap reached";
    } else {
        res.verdict.outcome = Outcome::Unreachable;
    }
    res.verdict.stats.seconds = seconds_since(t0);
    return res;
}

// Abstract state: writer + 1, writer pc, stages, memory, then one bit set per
// thread. The writer's set is the singleton of its pc.
using Key64 = std::vector<std::uint64_t>;
constexpr int kHeader = 4;

struct Key64Hash {
    std::size_t operator()(const Key64& k) const { return boost::hash_range(k.begin(), k.end()); }
};

struct Event {
    enum class Kind : std::uint8_t { Start, Step, Open } kind = Kind::Start;
    int thread = 0;
    Transition tr; // Step
    int pick = 0;  // Open: the writer's concrete state
};

class ReaderSets {
public:
    explicit ReaderSets(const BsrInstance& inst) : inst_(inst), prog_(inst.program) {
        int o = kHeader;
        for (const auto& th : prog_.threads) {
            offset_.push_back(o);
            o += (th.size() + 63) / 64;
        }
        width_ = o;
    }

    [[nodiscard]] Key64 initial() const {
        Key64 k(width_, 0);
        k[3] = static_cast<std::uint64_t>(prog_.init_sym);
        for (int i = 0; i < threads(); ++i) {
            set(k, i, prog_.threads[i].initial());
            close(k, i, prog_.init_sym);
        }
        return k;
    }

    [[nodiscard]] int threads() const { return static_cast<int>(prog_.threads.size()); }
    static int writer(const Key64& k) { return static_cast<int>(k[0]) - 1; }
    static int wpc(const Key64& k) { return static_cast<int>(k[1]); }
    static int stages(const Key64& k) { return static_cast<int>(k[2]); }
    static int mem(const Key64& k) { return static_cast<int>(k[3]); }

    [[nodiscard]] bool has(const Key64& k, int i, int q) const { return k[offset_[i] + q / 64] >> (q % 64) & 1; }
    void set(Key64& k, int i, int q) const { k[offset_[i] + q / 64] |= std::uint64_t{1} << (q % 64); }
    void clear(Key64& k, int i) const {
        const int end = i + 1 < threads() ? offset_[i + 1] : width_;
        std::fill(k.begin() + offset_[i], k.begin() + end, 0);
    }
    [[nodiscard]] std::vector<int> members(const Key64& k, int i) const {
        std::vector<int> out;
        for (int q = 0; q < prog_.threads[i].size(); ++q)
            if (has(k, i, q)) out.push_back(q);
        return out;
    }

    // Close thread i's set under eps and reads of a.
    void close(Key64& k, int i, int a) const {
        std::vector<int> work = members(k, i);
        while (!work.empty()) {
            const int q = work.back();
            work.pop_back();
            for (const auto& tr : prog_.threads[i].out(q)) {
                if (!local(tr.op, a) || has(k, i, tr.to)) continue;
                set(k, i, tr.to);
                work.push_back(tr.to);
            }
        }
    }

    [[nodiscard]] bool in_target(const Key64& k) const {
        if (inst_.target_memory && !std::binary_search(inst_.target_memory->begin(), inst_.target_memory->end(), mem(k)))
            return false;
        for (int i = 0; i < threads(); ++i) {
            const auto& tg = inst_.target.at(i);
            if (std::none_of(tg.begin(), tg.end(), [&](int q) { return has(k, i, q); })) return false;
        }
        return true;
    }

    template <class F>
    void successors(const Key64& k, F&& emit) const {
        const int w = writer(k);
        if (w >= 0)
            for (const auto& tr : prog_.threads[w].out(wpc(k))) {
                if (tr.op.kind == OpKind::Read && tr.op.sym != mem(k)) continue;
                Key64 nk = k;
                nk[1] = static_cast<std::uint64_t>(tr.to);
                clear(nk, w);
                set(nk, w, tr.to);
                if (tr.op.kind == OpKind::Write) {
                    nk[3] = static_cast<std::uint64_t>(tr.op.sym);
                    for (int i = 0; i < threads(); ++i)
                        if (i != w) close(nk, i, tr.op.sym);
                }
                emit(std::move(nk), Event{Event::Kind::Step, w, tr, 0});
            }
        if (stages(k) < inst_.stages)
            for (int m = 0; m < threads(); ++m)
                for (int p : members(k, m)) {
                    Key64 nk = k;
                    if (w >= 0 && w != m) close(nk, w, mem(k));
                    nk[0] = static_cast<std::uint64_t>(m + 1);
                    nk[1] = static_cast<std::uint64_t>(p);
                    nk[2] = k[2] + 1;
                    clear(nk, m);
                    set(nk, m, p);
                    emit(std::move(nk), Event{Event::Kind::Open, m, {}, p});
                }
    }

    // Shortest local path from some member of `from` to f under memory a.
    [[nodiscard]] std::pair<int, std::vector<Transition>> local_path(int i, const std::vector<int>& from, int f,
                                                                     int a) const {
        const Thread& th = prog_.threads[i];
        std::vector<int> prev(th.size(), -2);
        std::vector<Transition> via(th.size());
        std::deque<int> queue;
        for (int q : from) {
            prev[q] = -1;
            queue.push_back(q);
        }
        while (!queue.empty() && prev[f] == -2) {
            const int q = queue.front();
            queue.pop_front();
            for (const auto& tr : th.out(q))
                if (local(tr.op, a) && prev[tr.to] == -2) {
                    prev[tr.to] = q;
                    via[tr.to] = tr;
                    queue.push_back(tr.to);
                }
        }
        if (prev[f] == -2) throw std::logic_error("certificate reconstruction failed");
        std::vector<Transition> path;
        int q = f;
        for (; prev[q] != -1; q = prev[q]) path.push_back(via[q]);
        std::reverse(path.begin(), path.end());
        return {q, path};
    }

    // Concrete trace along a chain of abstract states (keys[0] is initial).
    [[nodiscard]] StageTrace reconstruct(const std::vector<Key64>& keys, const std::vector<Event>& events) const {
        const int n = static_cast<int>(keys.size()) - 1;
        const int t = threads();
        // moves[k][i]: local steps of thread i right after event k
        std::vector<std::vector<std::vector<Transition>>> moves(n + 1, std::vector<std::vector<Transition>>(t));
        for (int i = 0; i < t; ++i) {
            const auto& tg = inst_.target.at(i);
            int f = *std::find_if(tg.begin(), tg.end(), [&](int q) { return has(keys[n], i, q); });
            for (int k = n; k >= 1; --k) {
                const Event& ev = events[k];
                const Key64& prev = keys[k - 1];
                if (ev.kind == Event::Kind::Step) {
                    if (ev.thread == i) {
                        f = ev.tr.from;
                    } else if (ev.tr.op.kind == OpKind::Write) {
                        auto [src, path] = local_path(i, members(prev, i), f, ev.tr.op.sym);
                        moves[k][i] = std::move(path);
                        f = src;
                    }
                } else if (ev.kind == Event::Kind::Open && ev.thread != i && writer(prev) == i) {
                    auto [src, path] = local_path(i, {wpc(prev)}, f, mem(prev));
                    moves[k][i] = std::move(path);
                    f = src;
                }
            }
            auto [src, path] = local_path(i, {prog_.threads[i].initial()}, f, prog_.init_sym);
            moves[0][i] = std::move(path);
        }
        StageTrace trace;
        Configuration c = initial_configuration(prog_);
        auto play = [&](int k) {
            for (int i = 0; i < t; ++i)
                for (const auto& tr : moves[k][i]) {
                    c.pc[i] = tr.to;
                    trace.push_back({false, i, tr.op, c});
                }
        };
        play(0);
        for (int k = 1; k <= n; ++k) {
            const Event& ev = events[k];
            if (ev.kind == Event::Kind::Open) {
                trace.push_back({true, ev.thread, MemoryOp::eps(), c});
            } else {
                c.pc[ev.thread] = ev.tr.to;
                if (ev.tr.op.kind == OpKind::Write) c.memory = ev.tr.op.sym;
                trace.push_back({false, ev.thread, ev.tr.op, c});
            }
            play(k);
        }
        return trace;
    }

private:
    static bool local(const MemoryOp& op, int a) {
        return op.kind == OpKind::Eps || (op.kind == OpKind::Read && op.sym == a);
    }

    const BsrInstance& inst_;
    const Program& prog_;
    std::vector<int> offset_;
    int width_ = kHeader;
};

BsrResult solve_reader_sets(const BsrInstance& inst, const BsrOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    ReaderSets rs(inst);
    BsrResult res;
    struct AbstractNode {
        Key64 key;
        int parent;
        Event ev;
    };
    std::vector<AbstractNode> nodes{{rs.initial(), -1, {}}};
    std::unordered_map<Key64, int, Key64Hash> index{{nodes[0].key, 0}};
    int found = -1;
    bool budget = false;
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if (rs.in_target(nodes[head].key)) {
            found = static_cast<int>(head);
            break;
        }
        if (nodes.size() > opts.max_states) {
            budget = true;
            break;
        }
        const Key64 cur = nodes[head].key;
        rs.successors(cur, [&](Key64 nk, Event ev) {
            if (index.count(nk)) return;
            index.emplace(nk, static_cast<int>(nodes.size()));
            nodes.push_back({std::move(nk), static_cast<int>(head), ev});
        });
    }
    res.verdict.stats.nodes = nodes.size();
    if (found >= 0) {
        res.verdict.outcome = Outcome::Reachable;
        if (opts.certificate) {
            std::vector<Key64> keys;
            std::vector<Event> events;
            for (int v = found; v >= 0; v = nodes[v].parent) {
                keys.push_back(nodes[v].key);
                events.push_back(nodes[v].ev);
            }
            std::reverse(keys.begin(), keys.end());
            std::reverse(events.begin(), events.end());
            StageTrace trace = rs.reconstruct(keys, events);
            res.verdict.certificate = {trace_to_jsonl(trace, inst)};
            res.trace = std::move(trace);
        }
    } else if (budget) {
        res.verdict.outcome = Outcome::BudgetExceeded;
        res.verdict.note = "abstract state cap reached";
    } else {
        res.verdict.outcome = Outcome::Unreachable;
    }
    res.verdict.stats.seconds = seconds_since(t0);
    return res;
}

} // namespace

TraceCheck check_stage_trace(const StageTrace& trace, const BsrInstance& inst) {
    const Program& prog = inst.program;
    Configuration c = initial_configuration(prog);
    int stages = 0;
    int writer = -1;
    auto fail = [](int i, std::string why) { return TraceCheck{false, i, std::move(why)}; };
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& st = trace[i];
        const int idx = static_cast<int>(i);
        if (st.thread < 0 || st.thread >= static_cast<int>(prog.threads.size()))
            return fail(idx, "thread index out of range");
        if (st.boundary) {
            if (++stages > inst.stages) return fail(idx, "stage budget exceeded");
            writer = -1;
            continue;
        }
        if (st.op.kind == OpKind::Write) {
            if (stages == 0) return fail(idx, "write before the first stage");
            if (writer >= 0 && writer != st.thread) return fail(idx, "second writer within one stage");
            writer = st.thread;
        }
        bool ok = false;
        for (const auto& s : successors(prog, c))
            if (s.thread == st.thread && s.op == st.op && s.next == st.after) {
                ok = true;
                break;
            }
        if (!ok) return fail(idx, "step is not enabled");
        c = st.after;
    }
    if (!inst.in_target(c)) return fail(static_cast<int>(trace.size()), "final configuration is not a target");
    return {};
}

Verdict unrestricted_reach(const BsrInstance& inst, std::uint64_t max_states) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    std::vector<Configuration> queue{initial_configuration(inst.program)};
    std::unordered_map<Key, char, KeyHash> seen;
    auto key = [](const Configuration& c) {
        Key k = c.pc;
        k.push_back(c.memory);
        return k;
    };
    seen.emplace(key(queue.front()), 1);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Configuration c = queue[head];
        if (inst.in_target(c)) {
            v.outcome = Outcome::Reachable;
            break;
        }
        if (queue.size() > max_states) {
            v.outcome = Outcome::BudgetExceeded;
            v.note = "state cap reached";
            break;
        }
        for (auto& s : successors(inst.program, c))
            if (seen.emplace(key(s.next), 1).second) queue.push_back(std::move(s.next));
    }
    v.stats.nodes = queue.size();
    v.stats.seconds = seconds_since(t0);
    return v;
}

double product_state_bound(const BsrInstance& inst) {
    int P = 0;
    for (const auto& th : inst.program.threads) P = std::max(P, th.size());
    const double t = static_cast<double>(inst.program.threads.size());
    return std::pow(P, t) * (t + 1) * (inst.stages + 1) * inst.program.domain_size();
}

std::string trace_to_jsonl(const StageTrace& trace, const BsrInstance& inst) {
    const Program& prog = inst.program;
    std::ostringstream os;
    int stage = 0;
    for (const auto& st : trace) {
        nlohmann::json j;
        if (st.boundary) {
            ++stage;
            j = {{"stage", stage}, {"boundary", true}, {"writer", prog.threads[st.thread].name()}};
        } else {
            std::vector<std::string> pc;
            for (std::size_t i = 0; i < st.after.pc.size(); ++i)
                pc.push_back(prog.threads[i].state_name(st.after.pc[i]));
            j = {{"stage", stage},
                 {"thread", prog.threads[st.thread].name()},
                 {"op", op_token(st.op, prog.domain)},
                 {"pc", pc},
                 {"memory", prog.domain.at(st.after.memory)}};
        }
        os << j.dump() << "\n";
    }
    return os.str();
}

} // namespace shmv
