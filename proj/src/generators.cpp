#include "shmv/generators.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace shmv {

namespace {

class DomainBuilder {
public:
    DomainBuilder() { add("a0"); }

    int add(const std::string& name) {
        auto [it, fresh] = index_.emplace(name, static_cast<int>(names_.size()));
        if (fresh) names_.push_back(name);
        return it->second;
    }
    int at(const std::string& name) const { return index_.at(name); }
    const std::vector<std::string>& names() const { return names_; }
    int size() const { return static_cast<int>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

class ThreadBuilder {
public:
    explicit ThreadBuilder(std::string name) : name_(std::move(name)) {}

    int state(const std::string& n) {
        auto [it, fresh] = index_.emplace(n, static_cast<int>(names_.size()));
        if (fresh) names_.push_back(n);
        return it->second;
    }
    void add(const std::string& from, MemoryOp op, const std::string& to) {
        trans_.push_back({state(from), op, state(to)});
    }
    // A chain of operations; intermediate states are keyed by the origin and
    // the prefix, so words sharing a prefix share states.
    void add_word(const std::string& from, const std::vector<MemoryOp>& ops, const std::string& to,
                  const std::vector<std::string>& domain) {
        std::string cur = from;
        std::string key = from + "~";
        for (std::size_t i = 0; i < ops.size(); ++i) {
            key += op_token(ops[i], domain);
            const std::string next = i + 1 == ops.size() ? to : key;
            add(cur, ops[i], next);
            cur = next;
        }
    }
    int size() const { return static_cast<int>(names_.size()); }
    Thread build(const std::string& init) {
        const int q0 = state(init);
        return Thread(name_, names_, q0, trans_);
    }

private:
    std::string name_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<Transition> trans_;
};

std::string s(long v) { return std::to_string(v); }

bool satisfies(const std::vector<Literal>& clause, int var, bool value) {
    return std::any_of(clause.begin(), clause.end(),
                       [&](const Literal& l) { return l.var == var && l.positive == value; });
}

void require_equivalent(const std::vector<CnfFormula>& fs) {
    if (fs.empty()) throw std::invalid_argument("at least one formula is required");
    for (const auto& f : fs)
        if (f.num_vars != fs.front().num_vars || f.clauses.size() != fs.front().clauses.size())
            throw std::invalid_argument("formulas must agree on variable and clause counts");
}

// Bit b (1 = most significant) of l - 1 written with `bits` bits.
int index_bit(long l, int b, int bits) { return static_cast<int>(((l - 1) >> (bits - b)) & 1); }

GeneratorReport lcr_report(LcrInstance inst, std::string equivalence) {
    GeneratorReport r;
    Thread storage;
    const Thread& c = single_contributor(inst, storage);
    r.params = {{"D", inst.domain_size()}, {"L", inst.leader.size()}, {"C", c.size()}};
    r.equivalence = std::move(equivalence);
    r.instance = std::move(inst);
    return r;
}

GeneratorReport bsr_report(BsrInstance inst, std::string equivalence) {
    GeneratorReport r;
    int P = 0;
    for (const auto& th : inst.program.threads) P = std::max(P, th.size());
    r.params = {{"D", inst.program.domain_size()},
                {"P", P},
                {"t", static_cast<long>(inst.program.threads.size())},
                {"s", inst.stages}};
    r.equivalence = std::move(equivalence);
    r.instance = std::move(inst);
    return r;
}

LcrInstance make_lcr(const DomainBuilder& d, Thread leader, Thread contributor, const std::vector<std::string>& unsafe) {
    LcrInstance inst;
    inst.domain = d.names();
    inst.init_sym = 0;
    for (const auto& u : unsafe) inst.unsafe.push_back(leader.find_state(u).value());
    std::sort(inst.unsafe.begin(), inst.unsafe.end());
    inst.leader = std::move(leader);
    inst.contributors.push_back(std::move(contributor));
    return inst;
}

// Target sets given by state names, per thread.
BsrInstance make_bsr(const DomainBuilder& d, std::vector<Thread> threads,
                     const std::vector<std::vector<std::string>>& targets, int stages) {
    BsrInstance inst;
    inst.program.domain = d.names();
    inst.program.init_sym = 0;
    for (std::size_t i = 0; i < threads.size(); ++i) {
        std::vector<int> t;
        for (const auto& n : targets[i]) t.push_back(threads[i].find_state(n).value());
        std::sort(t.begin(), t.end());
        inst.target.push_back(std::move(t));
    }
    inst.program.threads = std::move(threads);
    inst.stages = stages;
    return inst;
}

} // namespace

int ceil_log2(long x) {
    if (x < 1) throw std::invalid_argument("ceil_log2 of a non-positive number");
    int b = 0;
    while ((1L << b) < x) ++b;
    return b;
}

GeneratorReport gen_lcr_from_kxk_clique(const GridGraph& g) {
    const int k = g.k();
    DomainBuilder d;
    for (int i = 1; i <= k; ++i) d.add("row" + s(i));
    for (int i = 1; i <= k; ++i) d.add("col" + s(i));
    for (int i = 1; i <= k; ++i) d.add("hash" + s(i));
    auto W = [&](const std::string& n) { return MemoryOp::write(d.at(n)); };
    auto R = [&](const std::string& n) { return MemoryOp::read(d.at(n)); };

    ThreadBuilder L("leader");
    L.state("q0");
    auto lc = [&](int i) { return i == 0 ? std::string("q0") : "c" + s(i); };
    auto lh = [&](int i) { return i == 0 ? lc(k) : "h" + s(i); };
    for (int i = 1; i <= k; ++i) {
        L.add(lc(i - 1), W("row" + s(i)), "r" + s(i));
        for (int j = 1; j <= k; ++j) L.add("r" + s(i), W("col" + s(j)), lc(i));
    }
    for (int i = 1; i <= k; ++i) L.add(lh(i - 1), R("hash" + s(i)), lh(i));

    ThreadBuilder C("contributor");
    C.state("init");
    auto v = [&](int i, int j) { return "(" + s(i) + "," + s(j) + ")"; };
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j) {
            C.add("init", MemoryOp::read(0), "c0" + v(i, j));
            for (int l = 1; l <= k; ++l) {
                C.add("c" + s(l - 1) + v(i, j), R("row" + s(l)), "r" + s(l) + v(i, j));
                for (int j2 = 1; j2 <= k; ++j2)
                    if ((i != l && g.edge(l, j2, i, j)) || (i == l && j2 == j))
                        C.add("r" + s(l) + v(i, j), R("col" + s(j2)), "c" + s(l) + v(i, j));
                C.state("c" + s(l) + v(i, j));
            }
            C.add("c" + s(k) + v(i, j), W("hash" + s(i)), "done");
        }
    auto inst = make_lcr(d, L.build("q0"), C.build("init"), {lh(k)});
    return lcr_report(std::move(inst), "reachable iff the grid graph has a k-clique with one vertex per row");
}

GeneratorReport gen_lcr_from_3sat(const CnfFormula& f) {
    const int n = f.num_vars;
    const int m = static_cast<int>(f.clauses.size());
    DomainBuilder d;
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) d.add("x" + s(i) + "=" + s(v));
    for (int j = 1; j <= m; ++j) d.add("hash" + s(j));

    ThreadBuilder L("leader");
    auto lx = [&](int i) { return "x" + s(i); };
    auto lh = [&](int j) { return j == 0 ? lx(n) : "h" + s(j); };
    L.state(lx(0));
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) L.add(lx(i - 1), MemoryOp::write(d.at("x" + s(i) + "=" + s(v))), lx(i));
    for (int j = 1; j <= m; ++j) L.add(lh(j - 1), MemoryOp::read(d.at("hash" + s(j))), lh(j));

    ThreadBuilder C("contributor");
    C.state("init");
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) {
            const std::string st = "x" + s(i) + "=" + s(v);
            C.add("init", MemoryOp::read(d.at(st)), st);
            for (int j = 1; j <= m; ++j)
                if (satisfies(f.clauses[j - 1], i, v)) C.add(st, MemoryOp::write(d.at("hash" + s(j))), st);
        }
    auto inst = make_lcr(d, L.build(lx(0)), C.build("init"), {lh(m)});
    return lcr_report(std::move(inst), "reachable iff the formula is satisfiable");
}

GeneratorReport gen_lcr_from_set_cover(const SetCoverInstance& sc) {
    const int n = sc.universe;
    const int r = sc.budget;
    if (n < 1) throw std::invalid_argument("the universe must be non-empty");
    if (r < 0) throw std::invalid_argument("negative budget");
    DomainBuilder d;
    for (int u = 1; u <= n; ++u) d.add("u" + s(u));
    for (int u = 1; u <= n; ++u) d.add("u" + s(u) + "#");

    ThreadBuilder L("leader");
    auto q = [&](int i) { return "q" + s(i); };
    auto h = [&](int i) { return i == 0 ? q(r + 1) : "h" + s(i); };
    L.state(q(1));
    for (int i = 1; i <= r; ++i) {
        L.state(q(i + 1));
        for (std::size_t S = 0; S < sc.sets.size(); ++S) {
            const auto& set = sc.sets[S];
            if (set.empty()) continue;
            auto st = [&](std::size_t j) { return "s" + s(i) + "." + s(static_cast<long>(S) + 1) + "." + s(static_cast<long>(j)); };
            L.add(q(i), MemoryOp::eps(), st(0));
            for (std::size_t j = 0; j < set.size(); ++j)
                L.add(st(j), MemoryOp::write(d.at("u" + s(set[j]))), j + 1 == set.size() ? q(i + 1) : st(j + 1));
        }
    }
    for (int u = 1; u <= n; ++u) L.add(h(u - 1), MemoryOp::read(d.at("u" + s(u) + "#")), h(u));

    ThreadBuilder C("contributor");
    C.state("init");
    for (int u = 1; u <= n; ++u) {
        C.add("init", MemoryOp::read(d.at("u" + s(u))), "p" + s(u));
        C.add("p" + s(u), MemoryOp::write(d.at("u" + s(u) + "#")), "p" + s(u));
    }
    auto inst = make_lcr(d, L.build(q(1)), C.build("init"), {h(n)});
    return lcr_report(std::move(inst), "reachable iff the universe is covered by at most budget sets");
}

GeneratorReport gen_lcr_crosscomp_dl(const std::vector<CnfFormula>& fs) {
    require_equivalent(fs);
    const long I = static_cast<long>(fs.size());
    const int b = ceil_log2(I);
    const int n = fs.front().num_vars;
    const int m = static_cast<int>(fs.front().clauses.size());
    DomainBuilder d;
    for (int l = 1; l <= b; ++l)
        for (int u = 0; u <= 1; ++u) d.add("bit" + s(l) + "=" + s(u));
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) d.add("x" + s(i) + "=" + s(v));
    for (int j = 1; j <= m; ++j) d.add("hash" + s(j));

    ThreadBuilder L("leader");
    auto lb = [&](int l) { return "b" + s(l); };
    auto lx = [&](int i) { return i == 0 ? lb(b) : "x" + s(i); };
    auto lh = [&](int j) { return j == 0 ? lx(n) : "h" + s(j); };
    L.state(lb(0));
    for (int l = 1; l <= b; ++l)
        for (int u = 0; u <= 1; ++u) L.add(lb(l - 1), MemoryOp::write(d.at("bit" + s(l) + "=" + s(u))), lb(l));
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) L.add(lx(i - 1), MemoryOp::write(d.at("x" + s(i) + "=" + s(v))), lx(i));
    for (int j = 1; j <= m; ++j) L.add(lh(j - 1), MemoryOp::read(d.at("hash" + s(j))), lh(j));

    ThreadBuilder C("contributor");
    C.state("t");
    // binary tree over bit strings; leaves encode l - 1
    std::vector<std::string> level{""};
    for (int depth = 0; depth < b; ++depth) {
        std::vector<std::string> next;
        for (const auto& w : level)
            for (int u = 0; u <= 1; ++u) {
                C.add("t" + w, MemoryOp::read(d.at("bit" + s(depth + 1) + "=" + s(u))), "t" + w + s(u));
                next.push_back(w + s(u));
            }
        level = std::move(next);
    }
    for (const auto& w : level) {
        long value = 0;
        for (char c : w) value = value * 2 + (c - '0');
        const long l = value + 1;
        if (l <= I) C.add("t" + w, MemoryOp::eps(), "ch" + s(l));
    }
    for (long l = 1; l <= I; ++l)
        for (int i = 1; i <= n; ++i)
            for (int v = 0; v <= 1; ++v) {
                const std::string st = "f" + s(l) + ":x" + s(i) + "=" + s(v);
                C.add("ch" + s(l), MemoryOp::read(d.at("x" + s(i) + "=" + s(v))), st);
                for (int j = 1; j <= m; ++j)
                    if (satisfies(fs[l - 1].clauses[j - 1], i, v)) C.add(st, MemoryOp::write(d.at("hash" + s(j))), st);
            }
    auto inst = make_lcr(d, L.build(lb(0)), C.build("t"), {lh(m)});
    return lcr_report(std::move(inst), "reachable iff some input formula is satisfiable");
}

GeneratorReport gen_lcr_crosscomp_c(const std::vector<CnfFormula>& fs) {
    require_equivalent(fs);
    const long I = static_cast<long>(fs.size());
    const int n = fs.front().num_vars;
    const int m = static_cast<int>(fs.front().clauses.size());
    DomainBuilder d;
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) d.add("x" + s(i) + "=" + s(v));
    for (long l = 1; l <= I; ++l)
        for (int j = 1; j <= m; ++j) d.add("hash" + s(l) + "_" + s(j));

    ThreadBuilder L("leader");
    auto lx = [&](int i) { return "x" + s(i); };
    auto lh = [&](long l, int j) { return "h" + s(l) + "_" + s(j); };
    L.state(lx(0));
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) L.add(lx(i - 1), MemoryOp::write(d.at("x" + s(i) + "=" + s(v))), lx(i));
    std::vector<std::string> unsafe;
    for (long l = 1; l <= I; ++l) {
        L.add(lx(n), MemoryOp::eps(), lh(l, 0));
        for (int j = 1; j <= m; ++j) L.add(lh(l, j - 1), MemoryOp::read(d.at("hash" + s(l) + "_" + s(j))), lh(l, j));
        unsafe.push_back(lh(l, m));
    }

    ThreadBuilder C("contributor");
    C.state("init");
    for (int i = 1; i <= n; ++i)
        for (int v = 0; v <= 1; ++v) {
            const std::string st = "x" + s(i) + "=" + s(v);
            C.add("init", MemoryOp::read(d.at(st)), st);
            for (long l = 1; l <= I; ++l)
                for (int j = 1; j <= m; ++j)
                    if (satisfies(fs[l - 1].clauses[j - 1], i, v))
                        C.add(st, MemoryOp::write(d.at("hash" + s(l) + "_" + s(j))), st);
        }
    auto inst = make_lcr(d, L.build(lx(0)), C.build("init"), unsafe);
    return lcr_report(std::move(inst), "reachable iff some input formula is satisfiable");
}

GeneratorReport gen_lcr_from_clique_L(const Graph& g) {
    const int k = g.k;
    const int N = g.vertices;
    if (k < 1) throw std::invalid_argument("clique size must be positive");
    DomainBuilder d;
    for (int i = 1; i <= k; ++i)
        for (int v = 1; v <= N; ++v) d.add("v" + s(v) + "@" + s(i));
    for (int i = 1; i <= k; ++i)
        for (int v = 1; v <= N; ++v) d.add("v" + s(v) + "#@" + s(i));
    for (int i = 1; i <= k; ++i) d.add("hash" + s(i));

    ThreadBuilder L("leader");
    auto lv = [&](int i) { return i == 0 ? std::string("q0") : "V" + s(i); };
    auto lw = [&](int i) { return i == 0 ? lv(k) : "W" + s(i); };
    auto lh = [&](int i) { return i == 0 ? lw(k) : "H" + s(i); };
    L.state("q0");
    for (int i = 1; i <= k; ++i)
        for (int v = 1; v <= N; ++v) L.add(lv(i - 1), MemoryOp::write(d.at("v" + s(v) + "@" + s(i))), lv(i));
    for (int i = 1; i <= k; ++i)
        for (int v = 1; v <= N; ++v) L.add(lw(i - 1), MemoryOp::write(d.at("v" + s(v) + "#@" + s(i))), lw(i));
    for (int i = 1; i <= k; ++i) L.add(lh(i - 1), MemoryOp::read(d.at("hash" + s(i))), lh(i));

    ThreadBuilder C("contributor");
    C.state("init");
    auto st = [&](int j, int v, int i) { return "s" + s(j) + "(" + s(v) + "," + s(i) + ")"; };
    for (int i = 1; i <= k; ++i)
        for (int v = 1; v <= N; ++v) {
            C.add("init", MemoryOp::read(d.at("v" + s(v) + "@" + s(i))), st(0, v, i));
            for (int j = 1; j <= k; ++j) {
                for (int w = 1; w <= N; ++w)
                    if ((j == i && v == w) || (i != j && v != w && g.adjacent(v, w)))
                        C.add(st(j - 1, v, i), MemoryOp::read(d.at("v" + s(w) + "#@" + s(j))), st(j, v, i));
                C.state(st(j, v, i));
            }
            C.add(st(k, v, i), MemoryOp::write(d.at("hash" + s(i))), "done");
        }
    auto inst = make_lcr(d, L.build("q0"), C.build("init"), {lh(k)});
    return lcr_report(std::move(inst), "reachable iff the graph has a clique of size k");
}

GeneratorReport gen_bsr_from_kxk_clique(const GridGraph& g) {
    const int k = g.k();
    DomainBuilder d;
    auto vx = [&](int i, int j) { return "v" + s(i) + "_" + s(j); };
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j) d.add(vx(i, j));

    std::vector<Thread> threads;
    std::vector<std::vector<std::string>> targets;
    for (int i = 1; i <= k; ++i) {
        ThreadBuilder P("row" + s(i));
        P.state("init");
        std::vector<std::string> target;
        auto st = [&](int j, int l) { return "q" + s(j) + "^" + s(l); };
        for (int j = 1; j <= k; ++j) {
            P.add("init", MemoryOp::read(0), st(j, 0));
            for (int l = 1; l <= k; ++l) {
                if (l == i) {
                    P.add(st(j, l - 1), MemoryOp::read(d.at(vx(i, j))), st(j, l));
                } else {
                    for (int m = 1; m <= k; ++m)
                        if (g.edge(i, j, l, m)) P.add(st(j, l - 1), MemoryOp::read(d.at(vx(l, m))), st(j, l));
                }
                P.state(st(j, l));
            }
            target.push_back(st(j, k));
        }
        threads.push_back(P.build("init"));
        targets.push_back(std::move(target));
    }
    ThreadBuilder W("writer");
    W.state("w0");
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j) W.add("w" + s(i - 1), MemoryOp::write(d.at(vx(i, j))), "w" + s(i));
    threads.push_back(W.build("w0"));
    targets.push_back({"w" + s(k)});
    auto inst = make_bsr(d, std::move(threads), targets, 1);
    return bsr_report(std::move(inst), "reachable within one stage iff the grid graph has a row clique");
}

GeneratorReport gen_bsr_crosscomp(const std::vector<CnfFormula>& fs) {
    require_equivalent(fs);
    const long I = static_cast<long>(fs.size());
    const int b = ceil_log2(I);
    const int n = fs.front().num_vars;
    const int m = static_cast<int>(fs.front().clauses.size());
    if (m < 1) throw std::invalid_argument("formulas need at least one clause");
    DomainBuilder d;
    auto tup = [&](long l, int j, int i, int v) { return "t" + s(l) + "_" + s(j) + "_" + s(i) + "_" + s(v); };
    for (long l = 1; l <= I; ++l)
        for (int j = 1; j <= m; ++j)
            for (int i = 1; i <= n; ++i)
                for (int v = 0; v <= 1; ++v) d.add(tup(l, j, i, v));

    std::vector<Thread> threads;
    std::vector<std::vector<std::string>> targets;

    ThreadBuilder W("writer");
    W.state("w0");
    for (int j = 1; j <= m; ++j)
        for (long l = 1; l <= I; ++l)
            for (int i = 1; i <= n; ++i)
                for (int v = 0; v <= 1; ++v) W.add("w" + s(j - 1), MemoryOp::write(d.at(tup(l, j, i, v))), "w" + s(j));
    threads.push_back(W.build("w0"));
    targets.push_back({"w" + s(m)});

    for (int i = 1; i <= n; ++i) {
        ThreadBuilder X("x" + s(i));
        X.state("init");
        auto st = [&](int v, int j) { return "v" + s(v) + "^" + s(j); };
        for (int v = 0; v <= 1; ++v) {
            X.add("init", MemoryOp::read(0), st(v, 0));
            for (int j = 1; j <= m; ++j) {
                for (long l = 1; l <= I; ++l) {
                    if (satisfies(fs[l - 1].clauses[j - 1], i, v))
                        X.add(st(v, j - 1), MemoryOp::read(d.at(tup(l, j, i, v))), st(v, j));
                    for (int i2 = 1; i2 <= n; ++i2)
                        if (i2 != i)
                            for (int v2 = 0; v2 <= 1; ++v2)
                                X.add(st(v, j - 1), MemoryOp::read(d.at(tup(l, j, i2, v2))), st(v, j));
                }
                X.state(st(v, j));
            }
        }
        threads.push_back(X.build("init"));
        targets.push_back({st(0, m), st(1, m)});
    }

    for (int bb = 1; bb <= b; ++bb) {
        ThreadBuilder B("bit" + s(bb));
        B.state("init");
        auto st = [&](int u, int j) { return "u" + s(u) + "^" + s(j); };
        for (long l = 1; l <= I; ++l) {
            const int u = index_bit(l, bb, b);
            for (int i = 1; i <= n; ++i)
                for (int v = 0; v <= 1; ++v) {
                    B.add("init", MemoryOp::read(d.at(tup(l, 1, i, v))), st(u, 1));
                    for (int j = 2; j <= m; ++j) B.add(st(u, j - 1), MemoryOp::read(d.at(tup(l, j, i, v))), st(u, j));
                }
        }
        for (int u = 0; u <= 1; ++u)
            for (int j = 1; j <= m; ++j) B.state(st(u, j));
        threads.push_back(B.build("init"));
        targets.push_back({st(0, m), st(1, m)});
    }
    auto inst = make_bsr(d, std::move(threads), targets, 1);
    return bsr_report(std::move(inst), "reachable within one stage iff some input formula is satisfiable");
}

GeneratorReport gen_bsr_constant_domain(const CnfFormula& f) {
    const int n = f.num_vars;
    const int m = static_cast<int>(f.clauses.size());
    if (n < 1) throw std::invalid_argument("formula needs at least one variable");
    DomainBuilder d;
    const int hash = d.add("#");
    const int bit[2] = {d.add("0"), d.add("1")};
    const int B = ceil_log2(n) + 1;
    auto enc = [&](int value, int var, bool write) {
        std::vector<MemoryOp> ops;
        auto op = [&](int sym) { return write ? MemoryOp::write(sym) : MemoryOp::read(sym); };
        ops.push_back(op(bit[value]));
        ops.push_back(op(hash));
        for (int k = B - 1; k >= 0; --k) {
            ops.push_back(op(bit[(var >> k) & 1]));
            ops.push_back(op(hash));
        }
        return ops;
    };

    std::vector<Thread> threads;
    std::vector<std::vector<std::string>> targets;
    for (int i = 1; i <= n; ++i) {
        ThreadBuilder P("x" + s(i));
        P.state("init");
        auto st = [&](int v, int j) { return "p" + s(v) + "^" + s(j); };
        for (int v = 0; v <= 1; ++v) {
            P.add("init", MemoryOp::read(0), st(v, 0));
            for (int j = 1; j <= m; ++j) {
                for (int i2 = 1; i2 <= n; ++i2)
                    for (int v2 = 0; v2 <= 1; ++v2)
                        if (i2 != i || v2 == v) P.add_word(st(v, j - 1), enc(v2, i2, false), st(v, j), d.names());
            }
        }
        threads.push_back(P.build("init"));
        targets.push_back({st(0, m), st(1, m)});
    }
    ThreadBuilder V("verifier");
    V.state("c0");
    for (int j = 1; j <= m; ++j)
        for (const auto& l : f.clauses[j - 1])
            V.add_word("c" + s(j - 1), enc(l.positive ? 1 : 0, l.var, true), "c" + s(j), d.names());
    threads.push_back(V.build("c0"));
    targets.push_back({"c" + s(m)});
    auto inst = make_bsr(d, std::move(threads), targets, 1);
    return bsr_report(std::move(inst), "reachable within one stage iff the formula is satisfiable");
}

LcrInstance random_lcr(const RandomLcrParams& p, std::uint64_t seed) {
    if (p.leader_states < 1 || p.contributor_states < 1 || p.domain < 1 || p.domain > 26 || p.templates < 1)
        throw std::invalid_argument("invalid random instance parameters");
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    LcrInstance inst;
    inst.domain.push_back("a0");
    for (int a = 1; a < p.domain; ++a) inst.domain.push_back(std::string(1, static_cast<char>('a' + a - 1)));
    auto random_thread = [&](const std::string& name, const std::string& prefix, int n) {
        std::vector<std::string> names;
        for (int q = 0; q < n; ++q) names.push_back(prefix + s(q));
        std::vector<Transition> trans;
        const int count = uni(n, 2 * n + 1);
        for (int k = 0; k < count; ++k) {
            const int kind = uni(0, 9);
            MemoryOp op = kind < 4 ? MemoryOp::write(uni(0, p.domain - 1))
                        : kind < 8 ? MemoryOp::read(uni(0, p.domain - 1))
                                   : MemoryOp::eps();
            trans.push_back({uni(0, n - 1), op, uni(0, n - 1)});
        }
        return Thread(name, names, 0, trans);
    };
    inst.leader = random_thread("leader", "q", p.leader_states);
    for (int t = 0; t < p.templates; ++t)
        inst.contributors.push_back(random_thread("contributor" + s(t), "p", p.contributor_states));
    inst.unsafe.push_back(p.leader_states == 1 ? 0 : uni(1, p.leader_states - 1));
    return inst;
}

BsrInstance random_bsr(const RandomBsrParams& p, std::uint64_t seed) {
    if (p.threads < 1 || p.states < 1 || p.domain < 1 || p.domain > 26 || p.stages < 0)
        throw std::invalid_argument("invalid random instance parameters");
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    BsrInstance inst;
    inst.program.domain.push_back("a0");
    for (int a = 1; a < p.domain; ++a) inst.program.domain.push_back(std::string(1, static_cast<char>('a' + a - 1)));
    for (int t = 0; t < p.threads; ++t) {
        std::vector<std::string> names;
        for (int q = 0; q < p.states; ++q) names.push_back("q" + s(q));
        std::vector<Transition> trans;
        const int count = uni(p.states, 2 * p.states + 1);
        for (int k = 0; k < count; ++k) {
            const int kind = uni(0, 9);
            MemoryOp op = kind < 4 ? MemoryOp::write(uni(0, p.domain - 1))
                        : kind < 8 ? MemoryOp::read(uni(0, p.domain - 1))
                                   : MemoryOp::eps();
            trans.push_back({uni(0, p.states - 1), op, uni(0, p.states - 1)});
        }
        inst.program.threads.emplace_back("t" + s(t), names, 0, trans);
        inst.target.push_back({uni(0, p.states - 1)});
    }
    inst.stages = p.stages;
    return inst;
}

CnfFormula random_3cnf(int vars, int clauses, std::uint64_t seed) {
    if (vars < 1 || clauses < 0) throw std::invalid_argument("invalid formula size");
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    CnfFormula f;
    f.num_vars = vars;
    for (int c = 0; c < clauses; ++c) {
        std::vector<Literal> clause;
        const int len = uni(1, 3);
        for (int k = 0; k < len; ++k) clause.push_back({uni(1, vars), uni(0, 1) == 1});
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

} // namespace shmv
