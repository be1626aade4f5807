// Command-line front end. Exit codes: 0 unreachable (safe), 1 reachable
// (unsafe), 2 usage or input error, 3 budget exceeded.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shmv {

enum ExitCode { kExitSafe = 0, kExitUnsafe = 1, kExitError = 2, kExitBudget = 3 };

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// One CSV row per (instance, algorithm) pair of the suite; header always present.
struct BenchRow {
    std::string instance;
    std::string algo;
    std::string verdict;
    unsigned long long nodes = 0;
    double seconds = 0.0;
    std::string status;
};

[[nodiscard]] std::vector<BenchRow> run_bench(const std::string& suite_path, unsigned long long max_nodes);
[[nodiscard]] std::string bench_csv(const std::vector<BenchRow>& rows);

} // namespace shmv
