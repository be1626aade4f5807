#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shmv/cli.hpp"
#include "support.hpp"

using namespace shmv;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("shmv_cli_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("verify lcr exit codes agree across algorithms") {
    for (const char* algo : {"witness", "scc", "dp", "explicit"}) {
        const auto r = cli({"verify", "lcr", "--algo", algo, test::data_path("running_example.json")});
        CHECK(r.code == kExitUnsafe);
        CHECK(r.out.find("verdict: reachable") != std::string::npos);
        CHECK(r.out.find("L=5 C=3 D=4") != std::string::npos);
    }
}

TEST_CASE("errors and budgets") {
    CHECK(cli({"verify", "lcr", "--algo", "witness", "missing.json"}).code == kExitError);
    CHECK(cli({"verify", "lcr", "--algo", "nonsense", test::data_path("running_example.json")}).code == kExitError);
    CHECK(cli({"verify", "bsr", test::data_path("running_example.json")}).code == kExitError);
    CHECK(cli({"frobnicate"}).code == kExitError);
    CHECK(cli({}).code == kExitError);
    CHECK(cli({"verify", "lcr", "--algo", "witness", "--max-nodes", "1", test::data_path("running_example.json")}).code ==
          kExitBudget);
    CHECK(cli({"--help"}).code == kExitSafe);
}

TEST_CASE("certificate and table outputs") {
    const auto cert = tmp("cert.txt");
    CHECK(cli({"verify", "lcr", "--algo", "witness", "--certificate", cert, test::data_path("running_example.json")}).code ==
          kExitUnsafe);
    CHECK(slurp(cert) == "~a q0 _ q1 b ~c q2\n");
    const auto table = tmp("table.txt");
    CHECK(cli({"verify", "lcr", "--algo", "dp", "--dump-table", table, test::data_path("subset_example.json")}).code ==
          kExitUnsafe);
    CHECK(slurp(table).find("S={p0,p1} : (q1,a) (q1,c)\n") != std::string::npos);
    CHECK(cli({"verify", "lcr", "--algo", "scc", "--dump-table", table, test::data_path("subset_example.json")}).code ==
          kExitError);
    std::remove(cert.c_str());
    std::remove(table.c_str());
}

TEST_CASE("generate, verify and bench") {
    const auto grid = tmp("grid.json");
    std::ofstream(grid) << R"({"k":2,"edges":[[1,1,2,2]]})";
    const auto inst = tmp("gen_kxk_k2.json");
    CHECK(cli({"gen", "kxk-bsr", grid, "-o", inst}).code == kExitSafe);
    const auto r = cli({"verify", "bsr", "--stages", "1", inst});
    CHECK(r.code == kExitUnsafe);
    const auto cert = tmp("trace.jsonl");
    CHECK(cli({"verify", "bsr", "--algo", "product", "--certificate", cert, inst}).code == kExitUnsafe);
    CHECK(slurp(cert).find("\"stage\":1") != std::string::npos);
    CHECK(cli({"verify", "bsr", "--stages", "0", inst}).code == kExitSafe);

    const auto cnf = tmp("f.cnf");
    std::ofstream(cnf) << "p cnf 1 2\n1 0\n-1 0\n";
    const auto lcr = tmp("gen_3sat.json");
    CHECK(cli({"gen", "3sat-lcr", cnf, "-o", lcr}).code == kExitSafe);
    CHECK(cli({"verify", "lcr", lcr}).code == kExitSafe);
    CHECK(cli({"gen", "3sat-lcr", cnf, cnf}).code == kExitError);
    CHECK(cli({"gen", "random-lcr", "--seed", "3"}).out.find("\"kind\": \"lcr\"") != std::string::npos);

    const auto suite = tmp("suite.json");
    std::ofstream(suite) << "{\"rows\":[{\"instance\":\"" << inst << "\",\"algo\":\"sets\"},"
                         << "{\"instance\":\"" << lcr << "\",\"algos\":[\"dp\",\"explicit\"]}]}";
    const auto bench = cli({"bench", "--suite", suite});
    CHECK(bench.code == kExitSafe);
    CHECK(std::count(bench.out.begin(), bench.out.end(), '\n') == 4);
    CHECK(bench.out.rfind("instance,algo,verdict,nodes,seconds,status\n", 0) == 0);

    const auto empty = tmp("empty.json");
    std::ofstream(empty) << "[]";
    CHECK(cli({"bench", "--suite", empty}).out == "instance,algo,verdict,nodes,seconds,status\n");

    CHECK(cli({"oracle", "lcr-bfs", "--copies", "2", test::data_path("running_example.json")}).code == kExitUnsafe);
    CHECK(cli({"oracle", "lcr-bfs", "--copies", "1", test::data_path("running_example.json")}).code == kExitSafe);
    for (const auto& f : {grid, inst, cert, cnf, lcr, suite, empty}) std::remove(f.c_str());
}
