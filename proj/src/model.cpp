#include "shmv/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace shmv {

using nlohmann::json;

Thread::Thread(std::string name, std::vector<std::string> states, int initial,
               std::vector<Transition> trans)
    : name_(std::move(name)), states_(std::move(states)), initial_(initial), trans_(std::move(trans)) {
    const int n = size();
    if (initial_ < 0 || initial_ >= n)
        throw std::invalid_argument("thread " + name_ + ": initial state out of range");
    for (const auto& t : trans_) {
        if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n)
            throw std::invalid_argument("thread " + name_ + ": transition endpoint out of range");
        if ((t.op.kind == OpKind::Eps) != (t.op.sym < 0))
            throw std::invalid_argument("thread " + name_ + ": malformed operation");
    }
    std::sort(trans_.begin(), trans_.end());
    trans_.erase(std::unique(trans_.begin(), trans_.end()), trans_.end());
    offset_.assign(n + 1, 0);
    for (const auto& t : trans_) ++offset_[t.from + 1];
    for (int q = 0; q < n; ++q) offset_[q + 1] += offset_[q];
}

std::optional<int> Thread::find_state(const std::string& n) const {
    auto it = std::find(states_.begin(), states_.end(), n);
    if (it == states_.end()) return std::nullopt;
    return static_cast<int>(it - states_.begin());
}

std::span<const Transition> Thread::out(int q) const {
    return {trans_.data() + offset_[q], trans_.data() + offset_[q + 1]};
}

bool LcrInstance::is_unsafe(int q) const {
    return std::binary_search(unsafe.begin(), unsafe.end(), q);
}

bool BsrInstance::in_target(const Configuration& c) const {
    for (std::size_t i = 0; i < target.size(); ++i)
        if (!std::binary_search(target[i].begin(), target[i].end(), c.pc[i])) return false;
    if (target_memory &&
        !std::binary_search(target_memory->begin(), target_memory->end(), c.memory))
        return false;
    return true;
}

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::Unreachable: return "unreachable";
    case Outcome::Reachable: return "reachable";
    case Outcome::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + msg),
      line_(line), column_(column) {}

SemanticError::SemanticError(const std::string& msg, std::string identifier)
    : std::runtime_error(msg + " '" + identifier + "'"), ident_(std::move(identifier)) {}

// ---------------------------------------------------------------- parsing

namespace {

struct Domain {
    std::vector<std::string> names;
    std::map<std::string, int> index;

    int lookup(const std::string& s) const {
        auto it = index.find(s);
        if (it == index.end()) throw SemanticError("unknown symbol", s);
        return it->second;
    }
};

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw SemanticError("missing field in " + where, key);
    return j.at(key);
}

std::string as_string(const json& j, const std::string& what) {
    if (!j.is_string()) throw SemanticError("expected a string for", what);
    return j.get<std::string>();
}

MemoryOp parse_op(const std::string& tok, const Domain& d) {
    if (tok == "eps") return MemoryOp::eps();
    if (tok.size() >= 2 && (tok[0] == '!' || tok[0] == '?')) {
        int a = d.lookup(tok.substr(1));
        return tok[0] == '!' ? MemoryOp::write(a) : MemoryOp::read(a);
    }
    throw SemanticError("bad operation", tok);
}

Thread parse_thread(const json& j, const Domain& d, const std::string& fallback_name) {
    std::vector<std::string> states;
    std::map<std::string, int> index;
    auto intern = [&](const std::string& s) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(states.size()));
        if (fresh) states.push_back(s);
        return it->second;
    };
    std::string name = fallback_name;
    if (j.contains("name")) name = as_string(j.at("name"), "thread name");
    const int init = intern(as_string(field(j, "init", "thread " + name), "init"));
    if (j.contains("states"))
        for (const auto& s : j.at("states")) intern(as_string(s, "state"));
    std::vector<Transition> trans;
    if (j.contains("trans")) {
        for (const auto& t : j.at("trans")) {
            if (!t.is_array() || t.size() != 3)
                throw SemanticError("transition must be [from, op, to] in thread", name);
            int from = intern(as_string(t[0], "state"));
            MemoryOp op = parse_op(as_string(t[1], "operation"), d);
            int to = intern(as_string(t[2], "state"));
            trans.push_back({from, op, to});
        }
    }
    return Thread(name, std::move(states), init, std::move(trans));
}

int state_of(const Thread& th, const std::string& s) {
    auto q = th.find_state(s);
    if (!q) throw SemanticError("unknown state", s);
    return *q;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; } else ++col;
    }
    return {line, col};
}

json thread_json(const Thread& th, const std::vector<std::string>& domain) {
    json trans = json::array();
    for (const auto& t : th.transitions())
        trans.push_back({th.state_name(t.from), op_token(t.op, domain), th.state_name(t.to)});
    return json{{"name", th.name()},
                {"init", th.state_name(th.initial())},
                {"states", th.state_names()},
                {"trans", trans}};
}

} // namespace

std::string op_token(const MemoryOp& op, const std::vector<std::string>& domain) {
    switch (op.kind) {
    case OpKind::Write: return "!" + domain.at(op.sym);
    case OpKind::Read: return "?" + domain.at(op.sym);
    case OpKind::Eps: return "eps";
    }
    return "eps";
}

Instance parse_program(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        throw ParseError(msg.substr(msg.find(':') + 2), line, col);
    }
    if (!j.is_object()) throw ParseError("top level must be an object", 1, 1);

    Domain d;
    const json& dom = field(j, "domain", "instance");
    if (!dom.is_array() || dom.empty()) throw SemanticError("domain must be a non-empty list", "domain");
    for (const auto& s : dom) {
        std::string n = as_string(s, "domain symbol");
        if (!d.index.emplace(n, static_cast<int>(d.names.size())).second)
            throw SemanticError("duplicate symbol", n);
        d.names.push_back(n);
    }
    const int init_sym = d.lookup(as_string(field(j, "init", "instance"), "init"));
    std::string kind = j.contains("kind") ? as_string(j.at("kind"), "kind") : "lcr";

    if (kind == "lcr") {
        LcrInstance inst;
        inst.domain = d.names;
        inst.init_sym = init_sym;
        inst.leader = parse_thread(field(j, "leader", "instance"), d, "leader");
        const json& cs = field(j, "contributors", "instance");
        if (!cs.is_array() || cs.empty())
            throw SemanticError("at least one contributor template required", "contributors");
        for (std::size_t i = 0; i < cs.size(); ++i)
            inst.contributors.push_back(parse_thread(cs[i], d, "contributor" + std::to_string(i)));
        if (j.contains("unsafe"))
            for (const auto& s : j.at("unsafe"))
                inst.unsafe.push_back(state_of(inst.leader, as_string(s, "unsafe state")));
        std::sort(inst.unsafe.begin(), inst.unsafe.end());
        inst.unsafe.erase(std::unique(inst.unsafe.begin(), inst.unsafe.end()), inst.unsafe.end());
        return inst;
    }
    if (kind == "bsr") {
        BsrInstance inst;
        inst.program.domain = d.names;
        inst.program.init_sym = init_sym;
        const json& ts = field(j, "threads", "instance");
        if (!ts.is_array() || ts.empty()) throw SemanticError("at least one thread required", "threads");
        for (std::size_t i = 0; i < ts.size(); ++i)
            inst.program.threads.push_back(parse_thread(ts[i], d, "P" + std::to_string(i)));
        const auto& threads = inst.program.threads;
        inst.target.resize(threads.size());
        std::vector<bool> constrained(threads.size(), false);
        const json& tgt = field(j, "target", "instance");
        if (!tgt.is_object()) throw SemanticError("target must be an object", "target");
        for (const auto& [key, val] : tgt.items()) {
            if (key == "memory") {
                std::vector<int> mem;
                for (const auto& s : val) mem.push_back(d.lookup(as_string(s, "memory symbol")));
                std::sort(mem.begin(), mem.end());
                mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
                inst.target_memory = std::move(mem);
                continue;
            }
            auto it = std::find_if(threads.begin(), threads.end(),
                                   [&](const Thread& t) { return t.name() == key; });
            if (it == threads.end()) throw SemanticError("unknown thread", key);
            auto idx = static_cast<std::size_t>(it - threads.begin());
            constrained[idx] = true;
            for (const auto& s : val) inst.target[idx].push_back(state_of(*it, as_string(s, "state")));
            std::sort(inst.target[idx].begin(), inst.target[idx].end());
            inst.target[idx].erase(std::unique(inst.target[idx].begin(), inst.target[idx].end()),
                                   inst.target[idx].end());
        }
        // A thread without an entry may end anywhere.
        for (std::size_t i = 0; i < threads.size(); ++i)
            if (!constrained[i])
                for (int q = 0; q < threads[i].size(); ++q) inst.target[i].push_back(q);
        const json& st = field(j, "stages", "instance");
        if (!st.is_number_integer() || st.get<long long>() < 0)
            throw SemanticError("stages must be a non-negative integer", "stages");
        inst.stages = st.get<int>();
        return inst;
    }
    throw SemanticError("unknown instance kind", kind);
}

std::string serialize_program(const LcrInstance& inst) {
    json j;
    j["kind"] = "lcr";
    j["domain"] = inst.domain;
    j["init"] = inst.domain.at(inst.init_sym);
    j["leader"] = thread_json(inst.leader, inst.domain);
    j["contributors"] = json::array();
    for (const auto& c : inst.contributors) j["contributors"].push_back(thread_json(c, inst.domain));
    j["unsafe"] = json::array();
    for (int q : inst.unsafe) j["unsafe"].push_back(inst.leader.state_name(q));
    return j.dump(1) + "\n";
}

std::string serialize_program(const BsrInstance& inst) {
    const auto& p = inst.program;
    json j;
    j["kind"] = "bsr";
    j["domain"] = p.domain;
    j["init"] = p.domain.at(p.init_sym);
    j["threads"] = json::array();
    for (const auto& t : p.threads) j["threads"].push_back(thread_json(t, p.domain));
    json tgt = json::object();
    for (std::size_t i = 0; i < p.threads.size(); ++i) {
        json states = json::array();
        for (int q : inst.target[i]) states.push_back(p.threads[i].state_name(q));
        tgt[p.threads[i].name()] = states;
    }
    if (inst.target_memory) {
        json mem = json::array();
        for (int a : *inst.target_memory) mem.push_back(p.domain.at(a));
        tgt["memory"] = mem;
    }
    j["target"] = tgt;
    j["stages"] = inst.stages;
    return j.dump(1) + "\n";
}

std::string serialize_program(const Instance& inst) {
    return std::visit([](const auto& x) { return serialize_program(x); }, inst);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str());
}

// ---------------------------------------------------------------- transforms

Thread merge_contributors(const std::vector<Thread>& templates) {
    if (templates.empty()) throw std::invalid_argument("merge_contributors: empty template list");
    std::vector<std::string> states{"init"};
    std::vector<Transition> trans;
    int base = 1;
    for (std::size_t k = 0; k < templates.size(); ++k) {
        const Thread& t = templates[k];
        for (const auto& s : t.state_names()) states.push_back(std::to_string(k) + "." + s);
        for (const auto& tr : t.transitions())
            trans.push_back({tr.from + base, tr.op, tr.to + base});
        trans.push_back({0, MemoryOp::eps(), t.initial() + base});
        base += t.size();
    }
    return Thread("merged", std::move(states), 0, std::move(trans));
}

const Thread& single_contributor(const LcrInstance& inst, Thread& storage) {
    if (inst.contributors.size() == 1) return inst.contributors.front();
    storage = merge_contributors(inst.contributors);
    return storage;
}

LcrInstance normalize_leader(const LcrInstance& inst) {
    const Thread& L = inst.leader;
    const int n = L.size();
    const int nd = inst.domain_size();

    // K[c][q]: q reaches a ?c transition using only eps and ?c moves.
    std::vector<std::vector<bool>> K(nd, std::vector<bool>(n, false));
    for (int c = 0; c < nd; ++c) {
        std::vector<int> work;
        for (const auto& t : L.transitions())
            if (t.op.kind == OpKind::Read && t.op.sym == c && !K[c][t.from]) {
                K[c][t.from] = true;
                work.push_back(t.from);
            }
        while (!work.empty()) {
            int q = work.back();
            work.pop_back();
            for (const auto& t : L.transitions())
                if (t.to == q && !K[c][t.from] &&
                    (t.op.kind == OpKind::Eps || (t.op.kind == OpKind::Read && t.op.sym == c))) {
                    K[c][t.from] = true;
                    work.push_back(t.from);
                }
        }
    }

    std::vector<std::string> names = L.state_names();
    std::map<std::pair<int, int>, int> tagged;
    std::vector<std::pair<int, int>> pending;
    auto tag = [&](int q, int c) -> int {
        if (c < 0 || !K[c][q]) return q;
        auto [it, fresh] = tagged.emplace(std::make_pair(q, c), static_cast<int>(names.size()));
        if (fresh) {
            names.push_back(L.state_name(q) + "|" + inst.domain[c]);
            pending.emplace_back(q, c);
        }
        return it->second;
    };

    std::vector<Transition> trans(L.transitions().begin(), L.transitions().end());
    for (const auto& t : L.transitions())
        if (t.op.kind == OpKind::Write) {
            int to = tag(t.to, t.op.sym);
            if (to != t.to) trans.push_back({t.from, t.op, to});
        }
    const int init = tag(L.initial(), inst.init_sym);

    while (!pending.empty()) {
        auto [q, c] = pending.back();
        pending.pop_back();
        const int src = tagged.at({q, c});
        for (const auto& t : L.out(q)) {
            switch (t.op.kind) {
            case OpKind::Write: trans.push_back({src, t.op, tag(t.to, t.op.sym)}); break;
            case OpKind::Eps: trans.push_back({src, t.op, tag(t.to, c)}); break;
            case OpKind::Read:
                if (t.op.sym == c) trans.push_back({src, MemoryOp::eps(), tag(t.to, c)});
                else trans.push_back({src, t.op, t.to});
                break;
            }
        }
    }

    LcrInstance out = inst;
    out.leader = Thread(L.name(), names, init, std::move(trans));
    for (const auto& [key, idx] : tagged)
        if (inst.is_unsafe(key.first)) out.unsafe.push_back(idx);
    std::sort(out.unsafe.begin(), out.unsafe.end());
    return out;
}

// ---------------------------------------------------------------- semantics

std::vector<Step> successors(const std::vector<const Thread*>& threads, const Configuration& c) {
    std::vector<Step> out;
    for (std::size_t i = 0; i < threads.size(); ++i) {
        for (const auto& t : threads[i]->out(c.pc[i])) {
            if (t.op.kind == OpKind::Read && t.op.sym != c.memory) continue;
            Step s{c, static_cast<int>(i), t.op};
            s.next.pc[i] = t.to;
            if (t.op.kind == OpKind::Write) s.next.memory = t.op.sym;
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<Step> successors(const Program& program, const Configuration& c) {
    std::vector<const Thread*> ts;
    for (const auto& t : program.threads) ts.push_back(&t);
    return successors(ts, c);
}

Configuration initial_configuration(const Program& program) {
    Configuration c;
    for (const auto& t : program.threads) c.pc.push_back(t.initial());
    c.memory = program.init_sym;
    return c;
}

} // namespace shmv
