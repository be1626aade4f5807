// Program model: threads as NFAs over reads, writes and eps on a single
// shared memory cell, plus the LCR and BSR instance types.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shmv {

enum class OpKind : std::uint8_t { Write, Read, Eps };

struct MemoryOp {
    OpKind kind = OpKind::Eps;
    int sym = -1; // -1 iff kind == Eps

    [[nodiscard]] static MemoryOp write(int a) { return {OpKind::Write, a}; }
    [[nodiscard]] static MemoryOp read(int a) { return {OpKind::Read, a}; }
    [[nodiscard]] static MemoryOp eps() { return {OpKind::Eps, -1}; }

    auto operator<=>(const MemoryOp&) const = default;
};

struct Transition {
    int from = 0;
    MemoryOp op;
    int to = 0;

    auto operator<=>(const Transition&) const = default;
};

// A thread keeps its transitions sorted by (from, op, to) and deduplicated;
// out(q) is the contiguous run of transitions leaving q.
class Thread {
public:
    Thread() = default;
    Thread(std::string name, std::vector<std::string> states, int initial,
           std::vector<Transition> trans);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] int size() const { return static_cast<int>(states_.size()); }
    [[nodiscard]] int initial() const { return initial_; }
    [[nodiscard]] const std::vector<std::string>& state_names() const { return states_; }
    [[nodiscard]] const std::string& state_name(int q) const { return states_.at(q); }
    [[nodiscard]] std::optional<int> find_state(const std::string& n) const;
    [[nodiscard]] const std::vector<Transition>& transitions() const { return trans_; }
    [[nodiscard]] std::span<const Transition> out(int q) const;

    void set_name(std::string n) { name_ = std::move(n); }

private:
    std::string name_;
    std::vector<std::string> states_;
    int initial_ = 0;
    std::vector<Transition> trans_;
    std::vector<int> offset_; // size()+1 entries into trans_
};

struct Program {
    std::vector<std::string> domain;
    int init_sym = 0;
    std::vector<Thread> threads;

    [[nodiscard]] int domain_size() const { return static_cast<int>(domain.size()); }
};

struct Configuration {
    std::vector<int> pc;
    int memory = 0;

    auto operator<=>(const Configuration&) const = default;
};

struct LcrInstance {
    std::vector<std::string> domain;
    int init_sym = 0;
    Thread leader;
    std::vector<Thread> contributors;
    std::vector<int> unsafe; // sorted leader state indices

    [[nodiscard]] int domain_size() const { return static_cast<int>(domain.size()); }
    [[nodiscard]] bool is_unsafe(int q) const;
};

struct BsrInstance {
    Program program;
    std::vector<std::vector<int>> target; // per thread, sorted
    std::optional<std::vector<int>> target_memory;
    int stages = 0;

    [[nodiscard]] bool in_target(const Configuration& c) const;
};

using Instance = std::variant<LcrInstance, BsrInstance>;

enum class Outcome { Unreachable, Reachable, BudgetExceeded };

struct Stats {
    std::uint64_t nodes = 0;
    double seconds = 0.0;
};

struct Verdict {
    Outcome outcome = Outcome::Unreachable;
    std::vector<std::string> certificate; // solver specific token list
    Stats stats;
    std::string note;

    [[nodiscard]] bool reachable() const { return outcome == Outcome::Reachable; }
};

[[nodiscard]] const char* to_string(Outcome o);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column);
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

private:
    int line_;
    int column_;
};

class SemanticError : public std::runtime_error {
public:
    SemanticError(const std::string& msg, std::string identifier);
    [[nodiscard]] const std::string& identifier() const { return ident_; }

private:
    std::string ident_;
};

[[nodiscard]] Instance parse_program(const std::string& text);
[[nodiscard]] std::string serialize_program(const Instance& inst);
[[nodiscard]] std::string serialize_program(const LcrInstance& inst);
[[nodiscard]] std::string serialize_program(const BsrInstance& inst);
[[nodiscard]] Instance load_instance(const std::string& path);

[[nodiscard]] std::string op_token(const MemoryOp& op, const std::vector<std::string>& domain);

// Fresh initial state with an eps edge to each template's initial state.
[[nodiscard]] Thread merge_contributors(const std::vector<Thread>& templates);

// Single-template view of an instance (templates merged when there are several).
[[nodiscard]] const Thread& single_contributor(const LcrInstance& inst, Thread& storage);

// Leader in which reads of the leader's own last write are available as eps
// from tagged copies of the reading states. Semantics are preserved.
[[nodiscard]] LcrInstance normalize_leader(const LcrInstance& inst);

struct Step {
    Configuration next;
    int thread = 0;
    MemoryOp op;
};

// threads[i] gives the NFA executed by pc slot i.
[[nodiscard]] std::vector<Step> successors(const std::vector<const Thread*>& threads,
                                           const Configuration& c);
[[nodiscard]] std::vector<Step> successors(const Program& program, const Configuration& c);

[[nodiscard]] Configuration initial_configuration(const Program& program);

} // namespace shmv
