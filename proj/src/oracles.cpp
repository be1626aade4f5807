#include "shmv/oracles.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include <boost/functional/hash.hpp>
#include <json.hpp>

namespace shmv {

using nlohmann::json;

bool CnfFormula::satisfied_by(const std::vector<bool>& assignment) const {
    for (const auto& c : clauses) {
        bool sat = false;
        for (const auto& l : c) sat |= assignment.at(l.var) == l.positive;
        if (!sat) return false;
    }
    return true;
}

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    int declared_clauses = 0;
    std::vector<Literal> cur;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == 'c' || tok[0] == '%') continue;
        if (tok == "p") {
            std::string fmt;
            if (!(ls >> fmt >> f.num_vars >> declared_clauses) || fmt != "cnf")
                throw ParseError("malformed problem line", lineno, 1);
            header = true;
            continue;
        }
        if (!header) throw ParseError("clause before problem line", lineno, 1);
        ls.clear();
        ls.str(line);
        int v;
        while (ls >> v) {
            if (v == 0) {
                if (cur.empty()) throw ParseError("empty clause", lineno, 1);
                f.clauses.push_back(std::move(cur));
                cur.clear();
                continue;
            }
            if (std::abs(v) > f.num_vars) throw SemanticError("variable out of range", std::to_string(v));
            cur.push_back({std::abs(v), v > 0});
        }
        if (!ls.eof()) throw ParseError("unexpected token", lineno, 1);
    }
    if (!header) throw ParseError("missing problem line", lineno, 1);
    if (!cur.empty()) f.clauses.push_back(std::move(cur));
    return f;
}

CnfFormula load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dimacs(ss.str());
}

std::string to_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    os << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
    for (const auto& c : f.clauses) {
        for (const auto& l : c) os << (l.positive ? l.var : -l.var) << " ";
        os << "0\n";
    }
    return os.str();
}

SetCoverInstance parse_set_cover(const std::string& json_text) {
    json j = json::parse(json_text);
    SetCoverInstance sc;
    sc.universe = j.at("universe").get<int>();
    sc.budget = j.at("budget").get<int>();
    for (const auto& s : j.at("sets")) {
        auto v = s.get<std::vector<int>>();
        for (int e : v)
            if (e < 1 || e > sc.universe) throw SemanticError("element outside the universe", std::to_string(e));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        sc.sets.push_back(std::move(v));
    }
    return sc;
}

std::string to_json(const SetCoverInstance& sc) {
    return json{{"universe", sc.universe}, {"sets", sc.sets}, {"budget", sc.budget}}.dump();
}

GridGraph::GridGraph(int k) : k_(k), adj_(k * k, std::vector<bool>(k * k, false)) {
    if (k < 1) throw std::invalid_argument("grid size must be positive");
}

void GridGraph::add_edge(int i, int j, int i2, int j2) {
    const int u = id(i, j), v = id(i2, j2);
    if (u == v) throw std::invalid_argument("self loops are not allowed");
    adj_.at(u).at(v) = adj_.at(v).at(u) = true;
}

bool GridGraph::edge(int i, int j, int i2, int j2) const { return adj_.at(id(i, j)).at(id(i2, j2)); }

GridGraph parse_grid_graph(const std::string& json_text) {
    json j = json::parse(json_text);
    GridGraph g(j.at("k").get<int>());
    for (const auto& e : j.at("edges")) {
        auto v = e.get<std::vector<int>>();
        if (v.size() != 4) throw SemanticError("grid edges have four coordinates", e.dump());
        for (int c : v)
            if (c < 1 || c > g.k()) throw SemanticError("coordinate out of range", e.dump());
        g.add_edge(v[0], v[1], v[2], v[3]);
    }
    return g;
}

std::string to_json(const GridGraph& g) {
    json edges = json::array();
    const int k = g.k();
    for (int u = 0; u < k * k; ++u)
        for (int v = u + 1; v < k * k; ++v)
            if (g.edge(u / k + 1, u % k + 1, v / k + 1, v % k + 1))
                edges.push_back({u / k + 1, u % k + 1, v / k + 1, v % k + 1});
    return json{{"k", k}, {"edges", edges}}.dump();
}

bool Graph::adjacent(int u, int v) const {
    for (const auto& [a, b] : edges)
        if ((a == u && b == v) || (a == v && b == u)) return true;
    return false;
}

Graph parse_graph(const std::string& json_text) {
    json j = json::parse(json_text);
    Graph g;
    g.vertices = j.at("vertices").get<int>();
    g.k = j.at("k").get<int>();
    for (const auto& e : j.at("edges")) {
        auto [u, v] = e.get<std::pair<int, int>>();
        if (u < 1 || v < 1 || u > g.vertices || v > g.vertices || u == v)
            throw SemanticError("invalid edge", e.dump());
        g.edges.emplace_back(u, v);
    }
    return g;
}

std::string to_json(const Graph& g) {
    return json{{"vertices", g.vertices}, {"edges", g.edges}, {"k", g.k}}.dump();
}

bool lcr_explicit_bfs(const LcrInstance& inst, int t, std::uint64_t max_states) {
    if (t < 0) throw std::invalid_argument("negative contributor count");
    std::vector<const Thread*> threads{&inst.leader};
    std::vector<std::pair<int, int>> groups; // [begin, end) pc slots per template
    for (const auto& c : inst.contributors) {
        const int b = static_cast<int>(threads.size());
        for (int i = 0; i < t; ++i) threads.push_back(&c);
        groups.emplace_back(b, b + t);
    }
    auto canon = [&](Configuration& c) {
        for (auto [b, e] : groups) std::sort(c.pc.begin() + b, c.pc.begin() + e);
    };
    struct Hash {
        std::size_t operator()(const Configuration& c) const {
            std::size_t h = boost::hash_range(c.pc.begin(), c.pc.end());
            boost::hash_combine(h, c.memory);
            return h;
        }
    };
    Configuration c0;
    for (const Thread* th : threads) c0.pc.push_back(th->initial());
    c0.memory = inst.init_sym;
    std::unordered_set<Configuration, Hash> seen{c0};
    std::vector<Configuration> queue{c0};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Configuration c = queue[head];
        if (inst.is_unsafe(c.pc[0])) return true;
        for (auto& s : successors(threads, c)) {
            canon(s.next);
            if (seen.insert(s.next).second) {
                if (seen.size() > max_states) throw CapExceeded("explicit search state cap exceeded");
                queue.push_back(std::move(s.next));
            }
        }
    }
    return false;
}

bool sat_brute(const CnfFormula& f) {
    if (f.num_vars > 24) throw CapExceeded("too many variables for brute force");
    std::vector<bool> a(f.num_vars + 1, false);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << f.num_vars); ++m) {
        for (int v = 1; v <= f.num_vars; ++v) a[v] = m >> (v - 1) & 1;
        if (f.satisfied_by(a)) return true;
    }
    return false;
}

bool set_cover_brute(const SetCoverInstance& sc) {
    if (sc.universe > 20) throw CapExceeded("universe too large for brute force");
    const std::uint32_t full = (std::uint32_t{1} << sc.universe) - 1;
    std::vector<std::uint32_t> masks;
    for (const auto& s : sc.sets) {
        std::uint32_t m = 0;
        for (int e : s) m |= std::uint32_t{1} << (e - 1);
        masks.push_back(m);
    }
    if (sc.budget < 0) return false;
    // layer = unions of at most r sets
    std::set<std::uint32_t> layer{0};
    for (int r = 0;; ++r) {
        if (layer.count(full)) return true;
        if (r == sc.budget) return false;
        std::set<std::uint32_t> next = layer;
        for (auto m : layer)
            for (auto s : masks) next.insert(m | s);
        if (next == layer) return false;
        layer = std::move(next);
    }
}

bool kxk_clique_brute(const GridGraph& g) {
    const int k = g.k();
    if (k > 5) throw CapExceeded("grid too large for brute force");
    std::vector<int> col(k + 1, 0);
    std::function<bool(int)> pick = [&](int i) {
        if (i > k) return true;
        for (int j = 1; j <= k; ++j) {
            bool ok = true;
            for (int r = 1; r < i && ok; ++r) ok = g.edge(r, col[r], i, j);
            if (!ok) continue;
            col[i] = j;
            if (pick(i + 1)) return true;
        }
        return false;
    };
    return pick(1);
}

bool clique_brute(const Graph& g) {
    if (g.vertices > 24) throw CapExceeded("graph too large for brute force");
    if (g.k <= 0) return true;
    std::vector<int> chosen;
    std::function<bool(int)> extend = [&](int from) {
        if (static_cast<int>(chosen.size()) == g.k) return true;
        for (int v = from; v <= g.vertices; ++v) {
            bool ok = true;
            for (int u : chosen) ok = ok && g.adjacent(u, v);
            if (!ok) continue;
            chosen.push_back(v);
            if (extend(v + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return extend(1);
}

} // namespace shmv
