// Machine constructions: the input-form checker, the prime-fingerprint 2PFA
// for EQ, and the lowering of query programs to 2QCFAs over ¢x$ and, through
// the AND-oracle gadget, over ¢x#^n y$.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "twoway/machines.hpp"
#include "twoway/querymodel.hpp"

namespace twoway {

// p <= n^2, or 2 < p < n^2
enum class PrimeRange { LeN2, OpenInterval };
std::string_view prime_range_name(PrimeRange r);
PrimeRange parse_prime_range(std::string_view name);

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);
std::vector<std::uint64_t> fingerprint_primes(std::size_t n, PrimeRange range);

// Pair: ¢ x #^n y $, Plain: ¢ x $
enum class TapeShape { Pair, Plain };
std::string_view shape_name(TapeShape s);
TapeShape parse_shape(std::string_view name);
std::size_t well_formed_length(std::size_t n, TapeShape shape);

// Deterministic single left-to-right pass accepting exactly the well-formed
// tapes of the shape; 3n+4 (pair) or n+4 (plain) states.
MachineSpec build_form_checker(std::size_t n, TapeShape shape);

struct CompiledMachine {
    MachineSpec machine;
    // provenance: builder name and parameters, mirrored in machine.builder
    std::string builder;
    nlohmann::json params;
    std::size_t n = 0;
    TapeShape shape = TapeShape::Plain;
    std::uint64_t declared_classical_states = 0;
    std::uint64_t declared_quantum_dim = 0;
    // Size of the full three-counter state space (each counter 0..n^2), when it
    // differs from the states actually built.
    std::optional<double> nominal_classical_states;
    // oracle calls in the compiled program (0 for the fingerprint machine)
    std::uint64_t query_count = 0;
    // worst-case steps on a well-formed tape
    std::uint64_t well_formed_step_bound = 0;
    // first state of each compiled block, and of the final block
    std::vector<StateId> block_starts;
};

CompiledMachine build_eq_fingerprint_2pfa(std::size_t n, PrimeRange range = PrimeRange::LeN2);

// Tapes ¢x$ with |x| = p.n. Quantum dim (n+1)m + 1.
CompiledMachine compile_query_program(const QueryProgram& p);
// Tapes ¢x#^n y$; each oracle call realizes O_{x AND y} with one auxiliary
// qubit. Quantum dim 2((n+1)m + 1).
CompiledMachine compile_and_oracle_program(const QueryProgram& p);

// Closed-form bound on steps for a tape of tape_len cells (markers included).
// Throws std::invalid_argument for an unknown builder.
std::uint64_t predicted_step_bound(const CompiledMachine& c, std::size_t tape_len);
// 50 * (tape_len + 1) * (1 + t)
std::uint64_t default_step_cap(const CompiledMachine& c, std::size_t tape_len);

struct SegmentTrace {
    StateVector state;
    std::uint64_t steps = 0;
};

// Follows unitary-only transitions from (state, head) until `stop` is entered,
// returning the quantum state there. Throws if a measurement or halting state
// comes first or after max_steps.
SegmentTrace trace_unitary_segment(const MachineSpec& m, const Tape& tape, StateId state, std::size_t head,
                                  StateVector q, StateId stop, std::uint64_t max_steps = 1'000'000);

// Embeds a (n+1)m register state into the AND-compiled space with aux = 0.
StateVector embed_with_aux(const StateVector& v);
// Index of register basis b with the auxiliary bit in the AND-compiled space.
inline std::size_t aux_index(std::size_t b, std::size_t aux) { return 2 * b + aux; }

}  // namespace twoway
