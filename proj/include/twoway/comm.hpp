// Two-party simulation over tapes ¢x#^n y$: Alice holds ¢x, Bob holds y$, the
// # block is shared. Whenever the head enters the other party's exclusive
// region the machine state is sent across.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "twoway/langs.hpp"
#include "twoway/machines.hpp"

namespace twoway {

enum class Party { Alice, Bob };
enum class CommMode { Exact, Sample };
std::string_view party_name(Party p);
std::string_view comm_mode_name(CommMode m);
CommMode parse_comm_mode(std::string_view name);

struct RegionSplit {
    std::size_t n = 0;
    // nullopt for the shared # block
    std::optional<Party> exclusive_owner(std::size_t cell) const;
};

struct CrossingMessage {
    Party from = Party::Alice;
    Party to = Party::Bob;
    std::uint64_t step_index = 0;
    std::uint64_t classical_bits = 0;
    std::uint64_t qubits = 0;
    // classical state sent; the quantum register travels symbolically
    StateId state = 0;
};

struct CommTranscript {
    CommMode mode = CommMode::Exact;
    std::size_t n = 0;
    // the branch with the most crossings
    std::vector<CrossingMessage> messages;
    std::uint64_t total_bits = 0;
    std::uint64_t total_qubits = 0;
    // maximal runs of messages from one sender (1 when there are none)
    std::uint64_t rounds = 0;
    // probability-weighted mean of total_bits over branches
    double expected_bits = 0.0;
    RunResult output;
};

// ceil(log2 |S|) and ceil(log2 max(dim, 1))
std::uint64_t message_bits(const MachineSpec& m);
std::uint64_t message_qubits(const MachineSpec& m);

// Same arithmetic as the plain engine for m.kind (exact) or as
// run_monte_carlo(m, tape, step_cap, 1, seed) (sample).
CommTranscript simulate_crossing_protocol(const MachineSpec& m, const Bits& x, const Bits& y, CommMode mode,
                                          std::uint64_t seed = 0, std::uint64_t step_cap = kDefaultStepCap);

struct CommCostReport {
    std::uint64_t total_bits = 0;
    std::uint64_t total_qubits = 0;
    std::uint64_t crossings = 0;
    std::uint64_t steps_max = 0;
    std::uint64_t bits_per_message = 0;
    // crossings <= steps_max / n + 1
    bool crossing_bound_ok = false;
    // total_bits <= ceil(log2 |S|) * (steps_max / n + 1)
    bool bits_bound_ok = false;
    // consecutive messages at least n steps apart
    bool separation_ok = false;
};

CommCostReport comm_cost_report(const CommTranscript& t, const MachineSpec& m);

}  // namespace twoway
