// Two-way automata over {0,1,#} with end markers: deterministic, probabilistic
// and quantum-classical (2QCFA) machines, plus the engines that run them.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "twoway/qcore.hpp"

namespace twoway {

enum class Symbol : std::uint8_t { Zero, One, Hash, LeftEnd, RightEnd };
inline constexpr std::size_t kSymbolCount = 5;
inline constexpr Symbol kAllSymbols[kSymbolCount] = {Symbol::Zero, Symbol::One, Symbol::Hash,
                                                     Symbol::LeftEnd, Symbol::RightEnd};

using Tape = std::vector<Symbol>;

// Accepts '0' '1' '#', left marker as "¢" or '<', right marker as '$' or '>'.
// Throws std::invalid_argument for other characters or misplaced markers.
Tape parse_tape(std::string_view text);
std::string to_string(const Tape& tape);
std::string_view symbol_text(Symbol s);
// Throws std::invalid_argument unless the tape is bracketed by markers with no
// marker in the interior.
void validate_tape(const Tape& tape);

enum class Move : std::int8_t { Left = -1, Stay = 0, Right = 1 };
enum class MachineKind { Deterministic, Probabilistic, QuantumClassical };
enum class StateFlag : std::uint8_t { Neither, Accepting, Rejecting };

std::string_view kind_name(MachineKind kind);
MachineKind parse_kind(std::string_view name);

using StateId = std::uint64_t;

struct ClassicalMove {
    StateId next = 0;
    Move move = Move::Stay;
    bool operator==(const ClassicalMove&) const = default;
};

struct WeightedMove {
    double weight = 0.0;
    ClassicalMove to;
};

// Theta(s, sigma) is a unitary; op == nullptr means the identity.
struct UnitaryAction {
    std::shared_ptr<const UnitaryOp> op;
    ClassicalMove then;
};

// Theta(s, sigma) is a measurement; per_outcome[k] is delta(s, sigma)(k).
struct MeasureAction {
    std::shared_ptr<const ProjectiveMeasurement> measurement;
    std::vector<ClassicalMove> per_outcome;
};

using Distribution = std::vector<WeightedMove>;
using Action = std::variant<ClassicalMove, Distribution, UnitaryAction, MeasureAction>;

using TransitionRule = std::function<Action(StateId, Symbol)>;
using FlagRule = std::function<StateFlag(StateId)>;

class UndefinedTransition : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedDistribution : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class HeadOutOfRange : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A named builder plus parameters; lets large machines serialize compactly.
struct BuilderRef {
    std::string name;
    nlohmann::json params;
};

struct MachineSpec {
    MachineKind kind = MachineKind::Deterministic;
    std::uint64_t classical_state_count = 1;
    std::size_t quantum_dim = 0;
    StateId initial_classical = 0;
    std::optional<StateVector> initial_quantum;
    FlagRule flags;
    TransitionRule transition;
    // When set, engines count entries into these states as oracle queries.
    std::function<bool(StateId)> is_query_start;
    std::optional<BuilderRef> builder;

    // Throws std::invalid_argument on inconsistent declarations.
    void validate() const;
};

// Explicit table form, for small machines and serialization.
struct TransitionTable {
    std::vector<StateId> accepting;
    std::vector<StateId> rejecting;
    // (state, symbol) -> action; absent entries are undefined transitions.
    std::vector<std::pair<std::pair<StateId, Symbol>, Action>> entries;
};

MachineSpec make_table_machine(MachineKind kind, std::uint64_t classical_state_count,
                               std::size_t quantum_dim, StateId initial_classical,
                               std::optional<StateVector> initial_quantum, TransitionTable table);

// Enumerates every non-halting (state, symbol) pair. Throws std::length_error
// above max_states.
TransitionTable materialize_table(const MachineSpec& m, std::uint64_t max_states = 4096);

// Determinism embedding: the same walk as a probabilistic / 2QCFA machine.
MachineSpec lift_to_probabilistic(const MachineSpec& deterministic);
MachineSpec lift_to_quantum(const MachineSpec& deterministic);

struct RunResult {
    double accept_prob = 0.0;
    double reject_prob = 0.0;
    double nonhalt_prob = 0.0;
    std::uint64_t steps_max = 0;
    double steps_expected = 0.0;
    double space_bits = 0.0;
    std::optional<std::uint64_t> queries_used;
};

inline constexpr std::uint64_t kDefaultStepCap = 1'000'000;
inline constexpr double kDefaultPruneEps = 1e-12;

// Called once per step by the exact engines with the live, halted and
// dropped (pruned) probability mass.
using MassObserver = std::function<void(std::uint64_t step, double live, double halted, double dropped)>;

RunResult run_deterministic(const MachineSpec& m, const Tape& tape,
                            std::uint64_t step_cap = kDefaultStepCap);
RunResult run_probabilistic_exact(const MachineSpec& m, const Tape& tape,
                                  std::uint64_t step_cap = kDefaultStepCap,
                                  const MassObserver& observer = {});
RunResult run_qcfa_exact(const MachineSpec& m, const Tape& tape,
                         std::uint64_t step_cap = kDefaultStepCap,
                         double prune_eps = kDefaultPruneEps, const MassObserver& observer = {});
RunResult run_monte_carlo(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap,
                          std::uint64_t trials, std::uint64_t seed);
// Dispatches on m.kind to the matching exact engine.
RunResult run_exact(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap = kDefaultStepCap);

// log2(classical_state_count) + log2(max(quantum_dim, 1))
double space_bits(const MachineSpec& m);

}  // namespace twoway
