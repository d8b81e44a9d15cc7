#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "twoway/compile.hpp"
#include "twoway/langs.hpp"

using namespace twoway;

namespace {

// Trial-division prime list, kept apart from the sieve under test.
std::vector<std::uint64_t> slow_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= limit; ++p) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
        if (prime) out.push_back(p);
    }
    return out;
}

double bad_prime_ratio(const Bits& x, const Bits& y, std::uint64_t limit) {
    const auto ps = slow_primes(limit);
    const std::uint64_t a = num_value(x), b = num_value(y);
    const std::uint64_t diff = a > b ? a - b : b - a;
    std::size_t bad = 0;
    for (std::uint64_t p : ps) bad += diff % p == 0;
    return static_cast<double>(bad) / static_cast<double>(ps.size());
}

}  // namespace

TEST(Primes, MatchTrialDivision) {
    for (std::uint64_t limit : {0u, 1u, 2u, 4u, 16u, 64u, 256u, 1000u}) EXPECT_EQ(primes_up_to(limit), slow_primes(limit));
    EXPECT_EQ(fingerprint_primes(2, PrimeRange::LeN2), (std::vector<std::uint64_t>{2, 3}));
    EXPECT_EQ(fingerprint_primes(4, PrimeRange::OpenInterval), (std::vector<std::uint64_t>{3, 5, 7, 11, 13}));
    EXPECT_EQ(fingerprint_primes(8, PrimeRange::LeN2).size(), 18u);
}

TEST(FormChecker, Examples) {
    const MachineSpec pair = build_form_checker(2, TapeShape::Pair);
    EXPECT_EQ(run_deterministic(pair, parse_tape("¢01##01$")).accept_prob, 1.0);
    EXPECT_EQ(run_deterministic(pair, parse_tape("¢01#01$")).accept_prob, 0.0);
    EXPECT_EQ(run_deterministic(pair, parse_tape("¢01##0#$")).accept_prob, 0.0);
    const MachineSpec plain = build_form_checker(4, TapeShape::Plain);
    EXPECT_EQ(run_deterministic(plain, parse_tape("¢0110$")).accept_prob, 1.0);
    EXPECT_EQ(run_deterministic(plain, parse_tape("¢011$")).accept_prob, 0.0);
    EXPECT_EQ(run_deterministic(plain, parse_tape("¢01#0$")).accept_prob, 0.0);
    EXPECT_EQ(pair.classical_state_count, 3u * 2 + 4);
    EXPECT_EQ(plain.classical_state_count, 4u + 4);
}

TEST(FormChecker, AllShortTapes) {
    const Symbol alphabet[] = {Symbol::Zero, Symbol::One, Symbol::Hash};
    for (std::size_t n = 1; n <= 2; ++n) {
        const MachineSpec pair = build_form_checker(n, TapeShape::Pair);
        for (std::size_t len = 0; len <= 7; ++len) {
            std::size_t total = 1;
            for (std::size_t i = 0; i < len; ++i) total *= 3;
            for (std::size_t code = 0; code < total; ++code) {
                Tape t{Symbol::LeftEnd};
                for (std::size_t i = 0, c = code; i < len; ++i, c /= 3) t.push_back(alphabet[c % 3]);
                t.push_back(Symbol::RightEnd);
                const auto d = decode_pair(t);
                const double want = d && d->first.size() == n ? 1.0 : 0.0;
                ASSERT_EQ(run_deterministic(pair, t).accept_prob, want) << to_string(t);
            }
        }
    }
}

TEST(Fingerprint, MembersAcceptedWithCertainty) {
    EXPECT_THROW(build_eq_fingerprint_2pfa(1), std::invalid_argument);
    for (std::size_t n : {2u, 3u, 5u}) {
        const CompiledMachine c = build_eq_fingerprint_2pfa(n);
        for (const Bits& x : all_bit_strings(n)) {
            EXPECT_EQ(run_probabilistic_exact(c.machine, encode_pair(x, x)).accept_prob, 1.0);
        }
    }
}

TEST(Fingerprint, NonMembersMatchBadPrimeRatio) {
    for (std::size_t n : {2u, 3u, 4u}) {
        for (PrimeRange range : {PrimeRange::LeN2, PrimeRange::OpenInterval}) {
            const CompiledMachine c = build_eq_fingerprint_2pfa(n, range);
            const std::uint64_t limit = n * n;
            for (const Bits& x : all_bit_strings(n)) {
                for (const Bits& y : all_bit_strings(n)) {
                    if (x == y) continue;
                    double want;
                    if (range == PrimeRange::LeN2) {
                        want = bad_prime_ratio(x, y, limit);
                    } else {
                        std::vector<std::uint64_t> ps;
                        for (auto p : slow_primes(limit - 1)) if (p > 2) ps.push_back(p);
                        if (ps.empty()) continue;
                        const std::uint64_t a = num_value(x), b = num_value(y), diff = a > b ? a - b : b - a;
                        std::size_t bad = 0;
                        for (auto p : ps) bad += diff % p == 0;
                        want = double(bad) / double(ps.size());
                    }
                    EXPECT_NEAR(run_probabilistic_exact(c.machine, encode_pair(x, y)).accept_prob, want, 1e-12);
                }
            }
        }
    }
}

TEST(Fingerprint, WorstCaseN8WithinBadPrimeCount) {
    const CompiledMachine c = build_eq_fingerprint_2pfa(8);
    const double bound = 7.0 / double(slow_primes(64).size());
    double worst = 0.0;
    for (const Bits& x : all_bit_strings(8)) {
        for (const Bits& y : all_bit_strings(8)) {
            if (x != y) worst = std::max(worst, run_probabilistic_exact(c.machine, encode_pair(x, y)).accept_prob);
        }
    }
    EXPECT_LE(worst, bound);
    EXPECT_LE(worst, 2.0 * std::log(8.0) / 8.0);
}

TEST(Fingerprint, StepsAndStates) {
    for (std::size_t n : {2u, 4u, 8u}) {
        const CompiledMachine c = build_eq_fingerprint_2pfa(n);
        const RunResult r = run_probabilistic_exact(c.machine, encode_pair(Bits(n, 1), Bits(n, 0)));
        EXPECT_EQ(r.steps_max, 3 * n + 2);
        EXPECT_EQ(c.well_formed_step_bound, 3 * n + 2);
        EXPECT_EQ(c.declared_classical_states, c.machine.classical_state_count);
        ASSERT_TRUE(c.nominal_classical_states);
        EXPECT_DOUBLE_EQ(*c.nominal_classical_states, std::pow(double(n * n + 1), 3));
        EXPECT_LT(space_bits(c.machine), 5.0 * std::log2(double(n)) + 4.0);
    }
    const CompiledMachine c = build_eq_fingerprint_2pfa(3);
    EXPECT_EQ(run_probabilistic_exact(c.machine, parse_tape("¢01##01$")).accept_prob, 0.0);
}

TEST(Compiler, FullProjectorAcceptsAll) {
    QueryProgram p;
    p.n = 4;
    p.m = 1;
    p.start = StateVector::basis(5, 2);
    p.final_measurement =
        std::make_shared<const ProjectiveMeasurement>(ProjectiveMeasurement::basis_partition({1, 1, 1, 1, 1}, {0, 1}));
    const CompiledMachine c = compile_query_program(p);
    for (const Bits& x : all_bit_strings(4)) {
        const RunResult r = run_qcfa_exact(c.machine, encode_plain(x));
        EXPECT_NEAR(r.accept_prob, 1.0, 1e-12);
        EXPECT_LE(r.steps_max, predicted_step_bound(c, 6));
    }
}

TEST(Compiler, ParityBothLevels) {
    const QueryProgram p = parity2_program();
    const CompiledMachine c = compile_query_program(p);
    EXPECT_EQ(c.declared_quantum_dim, 4u);
    for (const Bits& x : all_bit_strings(2)) {
        const RunResult r = run_qcfa_exact(c.machine, encode_plain(x));
        EXPECT_NEAR(r.accept_prob, run_query_program(p, x).accept_prob, 1e-9);
        EXPECT_NEAR(r.accept_prob, double(x[0] ^ x[1]), 1e-9);
        const std::uint64_t bound = predicted_step_bound(c, 4);
        EXPECT_LE(r.steps_max, bound);
        EXPECT_LE(bound, 3u * (1 + 2) * (2 + 2) + (2 * 2 + 3));
        EXPECT_EQ(r.queries_used, 1u);
    }
    EXPECT_EQ(run_qcfa_exact(c.machine, parse_tape("¢1$")).accept_prob, 0.0);
}

TEST(Compiler, RandomProgramsAgree) {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 12; ++k) {
        const std::size_t n = 1 + k % 4, m = 1 + k % 3, t = k % 5;
        const QueryProgram p = random_straight_line_program(n, m, t, rng);
        const CompiledMachine c = compile_query_program(p);
        for (const Bits& x : all_bit_strings(n)) {
            const RunResult r = run_qcfa_exact(c.machine, encode_plain(x));
            EXPECT_NEAR(r.accept_prob, run_query_program(p, x).accept_prob, 1e-9);
            EXPECT_NEAR(r.accept_prob + r.reject_prob, 1.0, 1e-9);
            EXPECT_EQ(r.steps_max, predicted_step_bound(c, n + 2));
        }
    }
}

// Gadget walk against a direct phase flip on x AND y, n = 3, all 64 pairs.
TEST(Gadget, MatchesDirectOracle) {
    QueryProgram p;
    p.n = 3;
    p.m = 1;
    p.start = uniform_nonzero_index(3);
    p.instructions.push_back(OracleCall{});
    p.final_measurement =
        std::make_shared<const ProjectiveMeasurement>(ProjectiveMeasurement::basis_partition({0, 1, 1, 1}, {0, 1}));
    const CompiledMachine c = compile_and_oracle_program(p);
    ASSERT_GE(c.block_starts.size(), 2u);
    std::mt19937_64 rng(8);
    for (const Bits& x : all_bit_strings(3)) {
        for (const Bits& y : all_bit_strings(3)) {
            const Tape tape = encode_pair(x, y);
            for (int trial = 0; trial < 3; ++trial) {
                const StateVector psi = random_state(4, rng);
                std::vector<Complex> want(2 * 4 + 2);
                for (std::size_t i = 0; i < 4; ++i) {
                    const bool flip = i > 0 && x[i - 1] && y[i - 1];
                    want[aux_index(i, 0)] = flip ? -psi[i] : psi[i];
                }
                const SegmentTrace t =
                    trace_unitary_segment(c.machine, tape, c.block_starts[0], 1, embed_with_aux(psi), c.block_starts[1]);
                EXPECT_LT(t.state.max_deviation(StateVector(want)), 1e-9);
                for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(t.state[aux_index(i, 1)], Complex(0.0, 0.0));
                EXPECT_EQ(t.steps, 6u * 3 + 2);
            }
        }
    }
}

TEST(Gadget, GroverOverPairs) {
    const CompiledMachine c = compile_and_oracle_program(grover_program(4));
    EXPECT_EQ(c.declared_quantum_dim, 2u * (5 + 1));
    EXPECT_GE(run_qcfa_exact(c.machine, encode_pair(parse_bits("1000"), parse_bits("1000"))).accept_prob, 2.0 / 3.0);
    EXPECT_EQ(run_qcfa_exact(c.machine, encode_pair(parse_bits("1000"), parse_bits("0111"))).accept_prob, 0.0);
    EXPECT_EQ(run_qcfa_exact(c.machine, encode_pair(Bits(4, 0), Bits(4, 0))).accept_prob, 0.0);
}

TEST(Gadget, StepBoundScaling) {
    for (std::size_t n : {4u, 8u, 16u}) {
        const CompiledMachine c = compile_and_oracle_program(grover_program(n));
        const std::size_t len = well_formed_length(n, TapeShape::Pair);
        const RunResult r = run_qcfa_exact(c.machine, encode_pair(Bits(n, 1), Bits(n, 0)), default_step_cap(c, len));
        EXPECT_EQ(r.accept_prob, 0.0);
        EXPECT_LE(r.steps_max, predicted_step_bound(c, len));
        EXPECT_LE(predicted_step_bound(c, len), 100.0 * n * std::sqrt(double(n)));
    }
}

TEST(StepBound, UnknownBuilderThrows) {
    CompiledMachine c = build_eq_fingerprint_2pfa(2);
    c.builder = "nope";
    EXPECT_THROW(predicted_step_bound(c, 8), std::invalid_argument);
    EXPECT_EQ(predicted_step_bound(build_eq_fingerprint_2pfa(2), 7), 7u);
}
