// Quantum query programs over the basis |i,j>, i in 0..n, j in 1..m, with the
// phase oracle O_x|i,j> = (-1)^{x_i}|i,j> and O_x|0,j> = |0,j>.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "twoway/langs.hpp"
#include "twoway/qcore.hpp"

namespace twoway {

// Basis index of |i,j> with j counted from 0.
inline std::size_t register_index(std::size_t i, std::size_t j, std::size_t m) { return i * m + j; }

struct ApplyUnitary {
    std::shared_ptr<const UnitaryOp> op;
};

struct OracleCall {};

struct Continuation {
    enum class Kind { Accept, Reject, Next, Verify };
    Kind kind = Kind::Next;
    // register index i checked by Verify; 0 always fails
    std::size_t index = 0;

    static Continuation accept() { return {Kind::Accept, 0}; }
    static Continuation reject() { return {Kind::Reject, 0}; }
    static Continuation next() { return {Kind::Next, 0}; }
    static Continuation verify(std::size_t i) { return {Kind::Verify, i}; }
    bool operator==(const Continuation&) const = default;
};

struct MeasureStep {
    std::shared_ptr<const ProjectiveMeasurement> measurement;
    std::vector<Continuation> per_outcome;
};

// Replace the register with a fixed state.
struct ResetStep {
    StateVector state;
};

using Instruction = std::variant<ApplyUnitary, OracleCall, MeasureStep, ResetStep>;

struct QueryProgram {
    std::size_t n = 1;
    std::size_t m = 1;
    StateVector start = StateVector::basis(1, 0);
    std::vector<Instruction> instructions;
    // Applied when control falls off the end; outcome labelled 1 accepts.
    // Without it, falling off the end rejects.
    std::shared_ptr<const ProjectiveMeasurement> final_measurement;

    std::size_t dim() const { return (n + 1) * m; }
    std::size_t query_count() const;
    bool is_straight_line() const;
    // Throws DimensionError / std::invalid_argument on inconsistent programs.
    void validate() const;
};

UnitaryOp oracle_matrix(const Bits& x, std::size_t m);

// Decides Verify(i); i is 1-based.
using Verifier = std::function<bool(std::size_t)>;

struct QueryResult {
    double accept_prob = 0.0;
    double reject_prob = 0.0;
    // oracle calls on the longest path with positive probability
    std::uint64_t queries = 0;
};

inline constexpr double kQueryPruneEps = 1e-12;

// Verify(i) reads x_i.
QueryResult run_query_program(const QueryProgram& p, const Bits& x);
QueryResult run_query_program(const QueryProgram& p, const Bits& x, const Verifier& verify);

std::vector<std::size_t> default_grover_schedule(std::size_t n);
std::uint64_t grover_query_budget(const std::vector<std::size_t>& schedule, std::size_t repeats);

// Outcome i for every |i,j>.
ProjectiveMeasurement index_measurement(std::size_t n, std::size_t m);
// 2|u><u| - I on the i >= 1 block, identity on |0>; m = 1.
UnitaryOp grover_diffusion(std::size_t n);
StateVector uniform_nonzero_index(std::size_t n);

QueryProgram grover_program(std::size_t n, const std::vector<std::size_t>& schedule, std::size_t repeats);
QueryProgram grover_program(std::size_t n);

// Exact one-query parity of two bits.
QueryProgram parity2_program();

// Haar-ish random unitary (QR of a complex Gaussian matrix).
UnitaryOp random_unitary(std::size_t dim, std::mt19937_64& rng);
StateVector random_state(std::size_t dim, std::mt19937_64& rng);
// U_0, O_x, U_1, ..., O_x, U_t with random unitaries, random start and a random
// computational-basis split into outcomes 0 and 1.
QueryProgram random_straight_line_program(std::size_t n, std::size_t m, std::size_t t,
                                          std::mt19937_64& rng);

}  // namespace twoway
