// Brute-force deciders: explicit search over programs with a fixed number of
// contributors, and exhaustive solvers for the source problems of the
// instance generators.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shmv/model.hpp"

namespace shmv {

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Literal {
    int var = 1; // 1-based
    bool positive = true;

    auto operator<=>(const Literal&) const = default;
};

struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<Literal>> clauses;

    [[nodiscard]] bool satisfied_by(const std::vector<bool>& assignment) const; // assignment[var]
};

[[nodiscard]] CnfFormula parse_dimacs(const std::string& text);
[[nodiscard]] CnfFormula load_dimacs(const std::string& path);
[[nodiscard]] std::string to_dimacs(const CnfFormula& f);

struct SetCoverInstance {
    int universe = 0;                   // elements 1..universe
    std::vector<std::vector<int>> sets; // sorted, deduplicated
    int budget = 0;
};

[[nodiscard]] SetCoverInstance parse_set_cover(const std::string& json_text);
[[nodiscard]] std::string to_json(const SetCoverInstance& sc);

// Vertices (i,j) with 1 <= i,j <= k, stored row-major.
class GridGraph {
public:
    explicit GridGraph(int k = 1);

    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] int id(int i, int j) const { return (i - 1) * k_ + (j - 1); }
    void add_edge(int i, int j, int i2, int j2);
    [[nodiscard]] bool edge(int i, int j, int i2, int j2) const;

private:
    int k_;
    std::vector<std::vector<bool>> adj_;
};

[[nodiscard]] GridGraph parse_grid_graph(const std::string& json_text);
[[nodiscard]] std::string to_json(const GridGraph& g);

struct Graph {
    int vertices = 0; // 1..vertices
    std::vector<std::pair<int, int>> edges;
    int k = 0;

    [[nodiscard]] bool adjacent(int u, int v) const;
};

[[nodiscard]] Graph parse_graph(const std::string& json_text);
[[nodiscard]] std::string to_json(const Graph& g);

// Explicit search of the program with t copies of each contributor template;
// contributor copies are kept sorted.
[[nodiscard]] bool lcr_explicit_bfs(const LcrInstance& inst, int t, std::uint64_t max_states = 5'000'000);

[[nodiscard]] bool sat_brute(const CnfFormula& f);
[[nodiscard]] bool set_cover_brute(const SetCoverInstance& sc);
[[nodiscard]] bool kxk_clique_brute(const GridGraph& g);
[[nodiscard]] bool clique_brute(const Graph& g);

} // namespace shmv
