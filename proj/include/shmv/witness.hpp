// Witness candidates for leader contributor reachability: a compressed
// leader run interleaved with the first writes of contributor values.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shmv/model.hpp"

namespace shmv {

struct WitnessLetter {
    enum class Kind : std::uint8_t { State, Symbol, Bottom, FirstWrite };
    Kind kind = Kind::Bottom;
    int value = -1;

    [[nodiscard]] static WitnessLetter state(int q) { return {Kind::State, q}; }
    [[nodiscard]] static WitnessLetter symbol(int a) { return {Kind::Symbol, a}; }
    [[nodiscard]] static WitnessLetter bottom() { return {Kind::Bottom, -1}; }
    [[nodiscard]] static WitnessLetter first_write(int a) { return {Kind::FirstWrite, a}; }

    auto operator<=>(const WitnessLetter&) const = default;
};

using WitnessCandidate = std::vector<WitnessLetter>;

enum class Validity { Valid = 0, RepeatedFirstWrite = 1, NoLeaderRun = 2, NoSupport = 3 };

class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// D̄(w,i) for every position i of w (as symbol bit masks, domain size <= 64).
[[nodiscard]] std::vector<std::uint64_t> first_write_sets(const WitnessCandidate& w);

// Symbols written on a cycle through q when reads are restricted to S.
[[nodiscard]] std::uint64_t loop_letters(const LcrInstance& inst, int q, std::uint64_t S);

// Throws ShapeError when w is not of the form (block bar)* state with
// repetition-free blocks of at most |Q_L| pairs and at most |D| bars.
void check_shape(const WitnessCandidate& w, const LcrInstance& inst);

// inst must be normalized and have a single contributor template.
[[nodiscard]] Validity check_validity(const WitnessCandidate& w, const LcrInstance& inst);

struct SolverOptions {
    std::uint64_t max_nodes = 20'000'000;
};

struct WitnessResult {
    Verdict verdict;
    std::optional<WitnessCandidate> witness;
    LcrInstance normalized; // instance the witness refers to
};

[[nodiscard]] WitnessResult solve_lcr_witness(const LcrInstance& inst, const SolverOptions& opts = {});

// Prepares an instance for check_validity: merged contributors, normalized leader.
[[nodiscard]] LcrInstance prepare_for_witness(const LcrInstance& inst);

[[nodiscard]] std::vector<std::string> witness_tokens(const WitnessCandidate& w, const LcrInstance& inst);
[[nodiscard]] WitnessCandidate parse_witness(const std::vector<std::string>& tokens, const LcrInstance& inst);

// Every shape-valid candidate with pairwise distinct bars; exponential, for tests.
void enumerate_candidates(const LcrInstance& inst,
                          const std::function<bool(const WitnessCandidate&)>& visit);

} // namespace shmv
