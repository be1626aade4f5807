// Instance generators: reductions from SAT, set cover and clique problems to
// LCR and BSR, plus seeded random instances for fuzzing.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shmv/model.hpp"
#include "shmv/oracles.hpp"

namespace shmv {

struct GeneratorReport {
    Instance instance;
    std::map<std::string, long> params; // D, L, C for LCR; D, P, t, s for BSR
    std::string equivalence;

    [[nodiscard]] const LcrInstance& lcr() const { return std::get<LcrInstance>(instance); }
    [[nodiscard]] const BsrInstance& bsr() const { return std::get<BsrInstance>(instance); }
};

[[nodiscard]] GeneratorReport gen_lcr_from_kxk_clique(const GridGraph& g);
[[nodiscard]] GeneratorReport gen_lcr_from_3sat(const CnfFormula& f);
[[nodiscard]] GeneratorReport gen_lcr_from_set_cover(const SetCoverInstance& sc);
[[nodiscard]] GeneratorReport gen_lcr_crosscomp_dl(const std::vector<CnfFormula>& fs);
[[nodiscard]] GeneratorReport gen_lcr_crosscomp_c(const std::vector<CnfFormula>& fs);
[[nodiscard]] GeneratorReport gen_lcr_from_clique_L(const Graph& g);
[[nodiscard]] GeneratorReport gen_bsr_from_kxk_clique(const GridGraph& g);
[[nodiscard]] GeneratorReport gen_bsr_crosscomp(const std::vector<CnfFormula>& fs);
[[nodiscard]] GeneratorReport gen_bsr_constant_domain(const CnfFormula& f);

// ceil(log2(x)) for x >= 1
[[nodiscard]] int ceil_log2(long x);

struct RandomLcrParams {
    int leader_states = 4;
    int contributor_states = 4;
    int domain = 3;
    int templates = 1;
};

struct RandomBsrParams {
    int threads = 2;
    int states = 3;
    int domain = 3;
    int stages = 1;
};

[[nodiscard]] LcrInstance random_lcr(const RandomLcrParams& p, std::uint64_t seed);
[[nodiscard]] BsrInstance random_bsr(const RandomBsrParams& p, std::uint64_t seed);
[[nodiscard]] CnfFormula random_3cnf(int vars, int clauses, std::uint64_t seed);

} // namespace shmv
