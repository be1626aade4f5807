#include "shmv/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shmv/bsr.hpp"
#include "shmv/dp.hpp"
#include "shmv/generators.hpp"
#include "shmv/oracles.hpp"
#include "shmv/scc.hpp"
#include "shmv/witness.hpp"

namespace shmv {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string join(const std::vector<std::string>& tokens, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) s += (i ? sep : "") + tokens[i];
    return s;
}

std::string lcr_params(const LcrInstance& inst) {
    Thread storage;
    const Thread& c = single_contributor(inst, storage);
    return "L=" + std::to_string(inst.leader.size()) + " C=" + std::to_string(c.size()) +
           " D=" + std::to_string(inst.domain_size());
}

std::string bsr_params(const BsrInstance& inst) {
    int P = 0;
    for (const auto& th : inst.program.threads) P = std::max(P, th.size());
    return "P=" + std::to_string(P) + " t=" + std::to_string(inst.program.threads.size()) +
           " s=" + std::to_string(inst.stages) + " D=" + std::to_string(inst.program.domain_size());
}

struct RunConfig {
    std::string algo;
    std::uint64_t max_nodes = 0; // 0 = solver default
    std::optional<int> stages;
    bool full_table = false;
};

struct RunOutput {
    Verdict verdict;
    std::string table; // dp only
};

RunOutput run_lcr(const LcrInstance& inst, const RunConfig& cfg) {
    RunOutput out;
    if (cfg.algo == "witness") {
        SolverOptions o;
        if (cfg.max_nodes) o.max_nodes = cfg.max_nodes;
        out.verdict = solve_lcr_witness(inst, o).verdict;
    } else if (cfg.algo == "scc") {
        SolverOptions o;
        if (cfg.max_nodes) o.max_nodes = cfg.max_nodes;
        out.verdict = solve_lcr_scc(inst, o).verdict;
    } else if (cfg.algo == "dp") {
        DpOptions o;
        if (cfg.max_nodes) o.max_sets = cfg.max_nodes;
        o.full_table = cfg.full_table;
        auto r = solve_lcr_dp(inst, o);
        out.verdict = std::move(r.verdict);
        if (cfg.full_table) out.table = dump_table(r.table, inst);
    } else if (cfg.algo == "explicit") {
        ExplicitOptions o;
        if (cfg.max_nodes) o.max_nodes = cfg.max_nodes;
        out.verdict = explicit_graph_reach(inst, o).verdict;
    } else {
        throw UsageError("unknown LCR algorithm '" + cfg.algo + "'");
    }
    return out;
}

RunOutput run_bsr(BsrInstance inst, const RunConfig& cfg) {
    BsrOptions o;
    if (cfg.max_nodes) o.max_states = cfg.max_nodes;
    if (cfg.algo == "product")
        o.engine = BsrEngine::Product;
    else if (cfg.algo == "sets" || cfg.algo.empty())
        o.engine = BsrEngine::ReaderSets;
    else
        throw UsageError("unknown BSR engine '" + cfg.algo + "'");
    if (cfg.stages) inst.stages = *cfg.stages;
    return {solve_bsr(inst, o).verdict, {}};
}

int exit_code(Outcome o) {
    switch (o) {
    case Outcome::Unreachable: return kExitSafe;
    case Outcome::Reachable: return kExitUnsafe;
    case Outcome::BudgetExceeded: return kExitBudget;
    }
    return kExitError;
}

void report(std::ostream& out, const Verdict& v, const std::string& algo, const std::string& params) {
    out << "verdict: " << to_string(v.outcome);
    if (v.outcome == Outcome::Reachable) out << " (unsafe: a target state is reachable)";
    if (v.outcome == Outcome::Unreachable) out << " (safe)";
    out << "\nalgorithm: " << algo << "\nnodes: " << v.stats.nodes << "\nseconds: " << v.stats.seconds
        << "\nparams: " << params << "\n";
    if (!v.note.empty()) out << "note: " << v.note << "\n";
}

std::vector<CnfFormula> load_formulas(const std::vector<std::string>& paths) {
    std::vector<CnfFormula> fs;
    for (const auto& p : paths) fs.push_back(load_dimacs(p));
    return fs;
}

GeneratorReport generate(const std::string& kind, const std::vector<std::string>& inputs) {
    auto one = [&]() -> const std::string& {
        if (inputs.size() != 1) throw UsageError("gen " + kind + " takes exactly one input file");
        return inputs.front();
    };
    if (kind == "kxk-lcr") return gen_lcr_from_kxk_clique(parse_grid_graph(read_file(one())));
    if (kind == "3sat-lcr") return gen_lcr_from_3sat(load_dimacs(one()));
    if (kind == "setcover-lcr") return gen_lcr_from_set_cover(parse_set_cover(read_file(one())));
    if (kind == "crosscomp-lcr-dl") return gen_lcr_crosscomp_dl(load_formulas(inputs));
    if (kind == "crosscomp-lcr-c") return gen_lcr_crosscomp_c(load_formulas(inputs));
    if (kind == "clique-lcr-l") return gen_lcr_from_clique_L(parse_graph(read_file(one())));
    if (kind == "kxk-bsr") return gen_bsr_from_kxk_clique(parse_grid_graph(read_file(one())));
    if (kind == "crosscomp-bsr") return gen_bsr_crosscomp(load_formulas(inputs));
    if (kind == "3sat-bsr-constd") return gen_bsr_constant_domain(load_dimacs(one()));
    throw UsageError("unknown generator '" + kind + "'");
}

} // namespace

std::vector<BenchRow> run_bench(const std::string& suite_path, unsigned long long max_nodes) {
    const auto suite = nlohmann::json::parse(read_file(suite_path));
    const nlohmann::json& entries = suite.is_array() ? suite : suite.at("rows");
    const auto base = std::filesystem::path(suite_path).parent_path();
    std::vector<BenchRow> rows;
    for (const auto& e : entries) {
        const std::string name = e.at("instance").get<std::string>();
        std::vector<std::string> algos;
        if (e.contains("algos")) algos = e.at("algos").get<std::vector<std::string>>();
        if (e.contains("algo")) algos.push_back(e.at("algo").get<std::string>());
        std::filesystem::path path(name);
        if (path.is_relative()) path = base / path;
        for (const auto& algo : algos) {
            BenchRow row{name, algo, "", 0, 0.0, "ok"};
            try {
                const Instance inst = load_instance(path.string());
                RunConfig cfg;
                cfg.algo = algo;
                cfg.max_nodes = max_nodes;
                if (e.contains("stages")) cfg.stages = e.at("stages").get<int>();
                const RunOutput r = std::holds_alternative<LcrInstance>(inst)
                                        ? run_lcr(std::get<LcrInstance>(inst), cfg)
                                        : run_bsr(std::get<BsrInstance>(inst), cfg);
                row.verdict = to_string(r.verdict.outcome);
                row.nodes = r.verdict.stats.nodes;
                row.seconds = r.verdict.stats.seconds;
                if (r.verdict.outcome == Outcome::BudgetExceeded) row.status = "budget";
            } catch (const std::exception& ex) {
                row.status = std::string("error: ") + ex.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::ostringstream os;
    os << "instance,algo,verdict,nodes,seconds,status\n";
    for (const auto& r : rows)
        os << quote(r.instance) << "," << quote(r.algo) << "," << r.verdict << "," << r.nodes << "," << r.seconds
           << "," << quote(r.status) << "\n";
    return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reachability checker for shared-memory programs with leader/contributor and staged semantics"};
    app.require_subcommand(1);

    std::string file;
    std::string lcr_algo;
    std::string bsr_algo;
    std::string certificate;
    std::string dump;
    unsigned long long max_nodes = 0;
    int stages = -1;

    auto* verify = app.add_subcommand("verify", "decide reachability of an instance file");
    auto* v_lcr = verify->add_subcommand("lcr", "leader contributor reachability");
    auto* v_bsr = verify->add_subcommand("bsr", "bounded-stage reachability");
    verify->require_subcommand(1);
    v_lcr->add_option("file", file, "instance file")->required();
    v_lcr->add_option("--algo", lcr_algo, "witness | scc | dp | explicit")->default_val("dp");
    v_lcr->add_option("--certificate", certificate, "write the certificate here");
    v_lcr->add_option("--dump-table", dump, "write the DP table here (dp only)");
    v_lcr->add_option("--max-nodes", max_nodes, "node budget");
    v_bsr->add_option("file", file, "instance file")->required();
    v_bsr->add_option("--stages", stages, "stage budget (overrides the file)");
    v_bsr->add_option("--algo", bsr_algo, "sets | product")->default_val("sets");
    v_bsr->add_option("--certificate", certificate, "write the stage trace (JSON lines) here");
    v_bsr->add_option("--max-nodes", max_nodes, "state budget");

    std::string kind;
    std::vector<std::string> inputs;
    std::string output;
    std::uint64_t seed = 0;
    RandomLcrParams rl;
    RandomBsrParams rb;
    auto* gen = app.add_subcommand("gen", "generate an instance from a source problem or at random");
    gen->add_option("kind", kind,
                    "kxk-lcr | 3sat-lcr | setcover-lcr | crosscomp-lcr-dl | crosscomp-lcr-c | clique-lcr-l | "
                    "kxk-bsr | crosscomp-bsr | 3sat-bsr-constd | random-lcr | random-bsr")
        ->required();
    gen->add_option("inputs", inputs, "source problem files (DIMACS or JSON)");
    gen->add_option("-o,--output", output, "instance file to write (stdout if omitted)");
    gen->add_option("--seed", seed, "seed for random kinds");
    gen->add_option("--leader-states", rl.leader_states);
    gen->add_option("--contributor-states", rl.contributor_states);
    gen->add_option("--templates", rl.templates);
    gen->add_option("--domain", rl.domain);
    gen->add_option("--threads", rb.threads);
    gen->add_option("--states", rb.states);
    gen->add_option("--stages", rb.stages);

    int copies = 0;
    auto* oracle = app.add_subcommand("oracle", "brute-force deciders");
    auto* o_bfs = oracle->add_subcommand("lcr-bfs", "explicit search with a fixed number of contributor copies");
    oracle->require_subcommand(1);
    o_bfs->add_option("file", file, "instance file")->required();
    o_bfs->add_option("--copies", copies, "contributor copies per template")->required()->check(CLI::NonNegativeNumber);
    o_bfs->add_option("--max-nodes", max_nodes, "state budget");

    std::string suite;
    auto* bench = app.add_subcommand("bench", "run a benchmark suite and print CSV");
    bench->add_option("--suite", suite, "suite JSON file")->required();
    bench->add_option("-o,--output", output, "CSV file to write (stdout if omitted)");
    bench->add_option("--max-nodes", max_nodes, "per-run budget");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitSafe : kExitError;
    }

    try {
        if (v_lcr->parsed()) {
            const Instance inst = load_instance(file);
            if (!std::holds_alternative<LcrInstance>(inst)) throw UsageError("not an LCR instance: " + file);
            const auto& lcr = std::get<LcrInstance>(inst);
            if (!dump.empty() && lcr_algo != "dp") throw UsageError("--dump-table requires --algo dp");
            RunConfig cfg{lcr_algo, max_nodes, std::nullopt, !dump.empty()};
            const RunOutput r = run_lcr(lcr, cfg);
            report(out, r.verdict, lcr_algo, lcr_params(lcr));
            if (!certificate.empty() && r.verdict.reachable()) {
                if (r.verdict.certificate.empty())
                    err << "note: --algo " << lcr_algo << " produces no certificate\n";
                else
                    write_file(certificate, join(r.verdict.certificate, " ") + "\n");
            }
            if (!dump.empty()) write_file(dump, r.table);
            return exit_code(r.verdict.outcome);
        }
        if (v_bsr->parsed()) {
            const Instance inst = load_instance(file);
            if (!std::holds_alternative<BsrInstance>(inst)) throw UsageError("not a BSR instance: " + file);
            BsrInstance bsr = std::get<BsrInstance>(inst);
            if (stages >= 0) bsr.stages = stages;
            const RunOutput r = run_bsr(bsr, RunConfig{bsr_algo, max_nodes, std::nullopt, false});
            report(out, r.verdict, bsr_algo, bsr_params(bsr));
            if (!certificate.empty() && r.verdict.reachable()) write_file(certificate, join(r.verdict.certificate, ""));
            return exit_code(r.verdict.outcome);
        }
        if (gen->parsed()) {
            std::string text;
            if (kind == "random-lcr") {
                text = serialize_program(random_lcr(rl, seed));
            } else if (kind == "random-bsr") {
                rb.domain = rl.domain;
                text = serialize_program(random_bsr(rb, seed));
            } else {
                const GeneratorReport rep = generate(kind, inputs);
                text = serialize_program(rep.instance);
                std::ostream& info = output.empty() ? err : out;
                for (const auto& [k, v] : rep.params) info << k << "=" << v << " ";
                info << "\n" << rep.equivalence << "\n";
            }
            if (output.empty())
                out << text;
            else
                write_file(output, text);
            return kExitSafe;
        }
        if (o_bfs->parsed()) {
            const Instance inst = load_instance(file);
            if (!std::holds_alternative<LcrInstance>(inst)) throw UsageError("not an LCR instance: " + file);
            const bool hit = max_nodes ? lcr_explicit_bfs(std::get<LcrInstance>(inst), copies, max_nodes)
                                       : lcr_explicit_bfs(std::get<LcrInstance>(inst), copies);
            out << "verdict: " << (hit ? "reachable" : "unreachable") << " with " << copies << " copies\n";
            return hit ? kExitUnsafe : kExitSafe;
        }
        if (bench->parsed()) {
            const std::string csv = bench_csv(run_bench(suite, max_nodes));
            if (output.empty())
                out << csv;
            else
                write_file(output, csv);
            return kExitSafe;
        }
    } catch (const CapExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ParseError& e) {
        err << "parse error at " << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return kExitError;
    } catch (const SemanticError& e) {
        err << "error: " << e.what() << " (" << e.identifier() << ")\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

} // namespace shmv
