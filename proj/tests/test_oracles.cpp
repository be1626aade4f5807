#include <doctest.h>

#include "shmv/oracles.hpp"
#include "support.hpp"

using namespace shmv;

namespace {

CnfFormula cnf(int n, std::vector<std::vector<int>> clauses) {
    CnfFormula f;
    f.num_vars = n;
    for (const auto& c : clauses) {
        std::vector<Literal> lits;
        for (int l : c) lits.push_back({std::abs(l), l > 0});
        f.clauses.push_back(lits);
    }
    return f;
}

GridGraph grid(int k, std::vector<std::array<int, 4>> edges) {
    GridGraph g(k);
    for (auto [a, b, c, d] : edges) g.add_edge(a, b, c, d);
    return g;
}

GridGraph complete_grid(int k) {
    GridGraph g(k);
    for (int u = 0; u < k * k; ++u)
        for (int v = u + 1; v < k * k; ++v) g.add_edge(u / k + 1, u % k + 1, v / k + 1, v % k + 1);
    return g;
}

} // namespace

TEST_CASE("sat fixtures") {
    CHECK(sat_brute(cnf(1, {{1, 1, 1}})));
    CHECK_FALSE(sat_brute(cnf(1, {{1}, {-1}})));
    CHECK(sat_brute(cnf(0, {})));
    CHECK(sat_brute(cnf(2, {{1, 2}, {-1, 2}, {1, -2}})));
    CHECK_FALSE(sat_brute(cnf(2, {{1, 2}, {-1, 2}, {1, -2}, {-1, -2}})));
    CHECK(sat_brute(cnf(3, {{1, 2, 3}, {-1, -2, -3}})));
    CHECK_FALSE(sat_brute(cnf(3, {{1}, {-1, 2}, {-2, 3}, {-3}})));
    CHECK(sat_brute(cnf(3, {{1}, {-1, 2}, {-2, 3}})));
    CHECK(sat_brute(cnf(4, {{-1, -2}, {-3, -4}, {1, 3}, {2, 4}})));
    CHECK_FALSE(sat_brute(cnf(1, {{1}, {1}, {-1, -1}})));
    // pigeonhole with 3 pigeons and 2 holes
    CHECK_FALSE(sat_brute(cnf(6, {{1, 2}, {3, 4}, {5, 6}, {-1, -3}, {-1, -5}, {-3, -5}, {-2, -4}, {-2, -6}, {-4, -6}})));
    CHECK_THROWS_AS((void)sat_brute(cnf(25, {{1}})), CapExceeded);
}

TEST_CASE("dimacs parsing") {
    const auto f = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n3 2\n-1 0\n");
    CHECK(f.num_vars == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[1].size() == 3);
    CHECK(f.clauses[1][2] == Literal{1, false});
    CHECK(parse_dimacs(to_dimacs(f)).clauses == f.clauses);
    CHECK_THROWS_AS((void)parse_dimacs("1 2 0\n"), ParseError);
    CHECK_THROWS_AS((void)parse_dimacs("p cnf 1 1\n2 0\n"), SemanticError);
    CHECK_THROWS_AS((void)parse_dimacs("p cnf 1 1\n1 x 0\n"), ParseError);
}

TEST_CASE("set cover fixtures") {
    auto sc = [](int n, std::vector<std::vector<int>> sets, int r) { return SetCoverInstance{n, sets, r}; };
    CHECK(set_cover_brute(sc(3, {{1, 2, 3}}, 1)));
    CHECK_FALSE(set_cover_brute(sc(3, {{1, 2, 3}}, 0)));
    CHECK(set_cover_brute(sc(0, {}, 0)));
    CHECK(set_cover_brute(sc(4, {{1, 2}, {3, 4}, {2, 3}}, 2)));
    CHECK_FALSE(set_cover_brute(sc(4, {{1, 2}, {2, 3}, {3, 4}}, 1)));
    CHECK_FALSE(set_cover_brute(sc(4, {{1}, {2}, {3}}, 3)));
    CHECK(set_cover_brute(sc(4, {{1}, {2}, {3}, {4}}, 4)));
    CHECK_FALSE(set_cover_brute(sc(4, {{1}, {2}, {3}, {4}}, 3)));
    CHECK(set_cover_brute(sc(5, {{1, 2, 3}, {3, 4}, {4, 5}, {1, 5}}, 2)));
    CHECK_FALSE(set_cover_brute(sc(6, {{1, 2}, {3, 4}, {5, 6}, {2, 3}}, 2)));
    CHECK(set_cover_brute(sc(2, {{}, {1, 2}}, 5)));
    const auto parsed = parse_set_cover(R"({"universe":3,"sets":[[3,1,1],[2]],"budget":2})");
    CHECK(parsed.sets[0] == std::vector<int>{1, 3});
    CHECK(set_cover_brute(parsed));
    CHECK_THROWS_AS((void)parse_set_cover(R"({"universe":2,"sets":[[3]],"budget":1})"), SemanticError);
}

TEST_CASE("grid clique fixtures") {
    for (int k = 1; k <= 4; ++k) CHECK(kxk_clique_brute(complete_grid(k)));
    CHECK(kxk_clique_brute(GridGraph(1)));
    CHECK_FALSE(kxk_clique_brute(GridGraph(2)));
    CHECK(kxk_clique_brute(grid(2, {{1, 1, 2, 2}})));
    CHECK(kxk_clique_brute(grid(2, {{1, 2, 2, 1}})));
    CHECK_FALSE(kxk_clique_brute(grid(2, {{1, 1, 1, 2}})));
    CHECK_FALSE(kxk_clique_brute(grid(2, {{1, 1, 1, 2}, {2, 1, 2, 2}})));
    CHECK(kxk_clique_brute(grid(3, {{1, 1, 2, 2}, {2, 2, 3, 3}, {1, 1, 3, 3}})));
    CHECK_FALSE(kxk_clique_brute(grid(3, {{1, 1, 2, 2}, {2, 2, 3, 3}, {1, 2, 3, 3}})));
    CHECK_FALSE(kxk_clique_brute(grid(3, {{1, 1, 2, 2}, {2, 2, 3, 3}})));
    const auto parsed = parse_grid_graph(R"({"k":2,"edges":[[1,1,2,2]]})");
    CHECK(parsed.edge(2, 2, 1, 1));
    CHECK(parse_grid_graph(to_json(parsed)).edge(1, 1, 2, 2));
    CHECK_THROWS((void)parse_grid_graph(R"({"k":2,"edges":[[1,1,1,1]]})"));
}

TEST_CASE("general clique fixtures") {
    Graph tri{3, {{1, 2}, {2, 3}, {1, 3}}, 3};
    CHECK(clique_brute(tri));
    Graph path{3, {{1, 2}, {2, 3}}, 3};
    CHECK_FALSE(clique_brute(path));
    path.k = 2;
    CHECK(clique_brute(path));
    const auto parsed = parse_graph(to_json(tri));
    CHECK(parsed.edges.size() == 3);
    CHECK(parsed.k == 3);
}

TEST_CASE("explicit search with a fixed number of contributors") {
    const auto running = test::load_lcr("running_example.json");
    CHECK_FALSE(lcr_explicit_bfs(running, 0));
    CHECK_FALSE(lcr_explicit_bfs(running, 1));
    CHECK(lcr_explicit_bfs(running, 2));
    CHECK(lcr_explicit_bfs(running, 3));
    CHECK_THROWS_AS((void)lcr_explicit_bfs(running, 6, 10), CapExceeded);
}
