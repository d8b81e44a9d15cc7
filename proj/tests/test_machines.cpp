#include <cmath>

#include <gtest/gtest.h>

#include "twoway/compile.hpp"
#include "twoway/langs.hpp"
#include "twoway/machines.hpp"

using namespace twoway;

namespace {

const double h = 1.0 / std::sqrt(2.0);

// 0 walks right until $, then 1 (accept); 2 rejects.
MachineSpec walk_to_end() {
    TransitionTable t;
    t.accepting = {1};
    t.rejecting = {2};
    for (Symbol s : {Symbol::LeftEnd, Symbol::Zero, Symbol::One, Symbol::Hash}) {
        t.entries.push_back({{0, s}, ClassicalMove{0, Move::Right}});
    }
    t.entries.push_back({{0, Symbol::RightEnd}, ClassicalMove{1, Move::Stay}});
    return make_table_machine(MachineKind::Deterministic, 3, 0, 0, std::nullopt, t);
}

MachineSpec fair_branch() {
    TransitionTable t;
    t.accepting = {1};
    t.rejecting = {2};
    t.entries.push_back({{0, Symbol::LeftEnd}, Distribution{{0.5, {1, Move::Stay}}, {0.5, {2, Move::Stay}}}});
    return make_table_machine(MachineKind::Probabilistic, 3, 0, 0, std::nullopt, t);
}

}  // namespace

TEST(Tape, ParseAndPrint) {
    const Tape t = parse_tape("¢01#$");
    ASSERT_EQ(t.size(), 5u);
    EXPECT_EQ(t[0], Symbol::LeftEnd);
    EXPECT_EQ(t[3], Symbol::Hash);
    EXPECT_EQ(parse_tape("<01#>"), t);
    EXPECT_EQ(to_string(t), "¢01#$");
    EXPECT_THROW(parse_tape("01$"), std::invalid_argument);
    EXPECT_THROW(parse_tape("<0$1>"), std::invalid_argument);
    EXPECT_THROW(parse_tape("<a>"), std::invalid_argument);
}

TEST(Deterministic, AcceptOnFirstEndMarker) {
    const RunResult r = run_deterministic(walk_to_end(), parse_tape("¢$"));
    EXPECT_EQ(r.accept_prob, 1.0);
    EXPECT_EQ(r.steps_max, 2u);
    EXPECT_EQ(r.steps_expected, 2.0);
    EXPECT_DOUBLE_EQ(r.space_bits, std::log2(3.0));
}

TEST(Deterministic, TwoCycleHitsCap) {
    TransitionTable t;
    for (Symbol s : kAllSymbols) {
        t.entries.push_back({{0, s}, ClassicalMove{1, Move::Stay}});
        t.entries.push_back({{1, s}, ClassicalMove{0, Move::Stay}});
    }
    const MachineSpec m = make_table_machine(MachineKind::Deterministic, 2, 0, 0, std::nullopt, t);
    const RunResult r = run_deterministic(m, parse_tape("¢0$"), 100);
    EXPECT_EQ(r.nonhalt_prob, 1.0);
    EXPECT_EQ(r.accept_prob, 0.0);
    EXPECT_EQ(r.steps_max, 100u);
}

TEST(Deterministic, Errors) {
    TransitionTable t;
    t.entries.push_back({{0, Symbol::LeftEnd}, ClassicalMove{0, Move::Left}});
    const MachineSpec off = make_table_machine(MachineKind::Deterministic, 1, 0, 0, std::nullopt, t);
    EXPECT_THROW(run_deterministic(off, parse_tape("¢$")), HeadOutOfRange);
    const MachineSpec m = walk_to_end();
    EXPECT_THROW(run_deterministic(fair_branch(), parse_tape("¢$")), std::invalid_argument);
    TransitionTable partial;
    partial.entries.push_back({{0, Symbol::LeftEnd}, ClassicalMove{0, Move::Right}});
    const MachineSpec gap = make_table_machine(MachineKind::Deterministic, 1, 0, 0, std::nullopt, partial);
    EXPECT_THROW(run_deterministic(gap, parse_tape("¢0$")), UndefinedTransition);
    EXPECT_THROW(make_table_machine(MachineKind::Deterministic, 1, 0, 3, std::nullopt, {}), std::invalid_argument);
    (void)m;
}

TEST(Deterministic, FormCheckerAcceptsShapedTape) {
    const RunResult r = run_deterministic(build_form_checker(2, TapeShape::Pair), parse_tape("¢01##01$"));
    EXPECT_EQ(r.accept_prob, 1.0);
}

TEST(Probabilistic, FairBranch) {
    const RunResult r = run_probabilistic_exact(fair_branch(), parse_tape("¢$"));
    EXPECT_DOUBLE_EQ(r.accept_prob, 0.5);
    EXPECT_DOUBLE_EQ(r.reject_prob, 0.5);
    EXPECT_EQ(r.steps_max, 1u);
}

TEST(Probabilistic, LiftedDeterministicMatches) {
    const MachineSpec d = walk_to_end();
    const Tape tape = parse_tape("¢0110#$");
    const RunResult a = run_deterministic(d, tape);
    const RunResult b = run_probabilistic_exact(lift_to_probabilistic(d), tape);
    const RunResult c = run_qcfa_exact(lift_to_quantum(d), tape);
    for (const RunResult* r : {&b, &c}) {
        EXPECT_EQ(r->accept_prob, a.accept_prob);
        EXPECT_EQ(r->steps_max, a.steps_max);
        EXPECT_EQ(r->steps_expected, a.steps_expected);
    }
}

TEST(Probabilistic, MalformedDistribution) {
    TransitionTable t;
    t.accepting = {1};
    t.entries.push_back({{0, Symbol::LeftEnd}, Distribution{{0.5, {1, Move::Stay}}, {0.4, {1, Move::Stay}}}});
    const MachineSpec m = make_table_machine(MachineKind::Probabilistic, 2, 0, 0, std::nullopt, t);
    EXPECT_THROW(run_probabilistic_exact(m, parse_tape("¢$")), MalformedDistribution);
}

TEST(Probabilistic, FingerprintExample) {
    const CompiledMachine c = build_eq_fingerprint_2pfa(2);
    const RunResult r = run_probabilistic_exact(c.machine, encode_pair(parse_bits("01"), parse_bits("11")));
    EXPECT_DOUBLE_EQ(r.accept_prob, 0.5);
}

TEST(Qcfa, IdentityWalkAccepts) {
    const RunResult r = run_qcfa_exact(lift_to_quantum(walk_to_end()), parse_tape("¢01$"));
    EXPECT_DOUBLE_EQ(r.accept_prob, 1.0);
    EXPECT_DOUBLE_EQ(r.space_bits, std::log2(3.0));
}

TEST(Qcfa, MeasureEvenSuperposition) {
    TransitionTable t;
    t.accepting = {1};
    t.rejecting = {2};
    auto meas = std::make_shared<const ProjectiveMeasurement>(ProjectiveMeasurement::basis_partition({0, 1}, {0, 1}));
    t.entries.push_back({{0, Symbol::LeftEnd}, MeasureAction{meas, {{1, Move::Stay}, {2, Move::Stay}}}});
    const MachineSpec m = make_table_machine(MachineKind::QuantumClassical, 3, 2, 0, StateVector({{h, 0}, {h, 0}}), t);
    const RunResult r = run_qcfa_exact(m, parse_tape("¢$"));
    EXPECT_NEAR(r.accept_prob, 0.5, 1e-15);
    EXPECT_NEAR(r.reject_prob, 0.5, 1e-15);
}

TEST(Qcfa, RejectsBadDeclarations) {
    EXPECT_THROW(make_table_machine(MachineKind::QuantumClassical, 1, 2, 0, StateVector::basis(3, 0), {}),
                 std::invalid_argument);
    EXPECT_THROW(make_table_machine(MachineKind::QuantumClassical, 1, 0, 0, std::nullopt, {}), std::invalid_argument);
}

TEST(Qcfa, ParityCompiled) {
    const CompiledMachine c = compile_query_program(parity2_program());
    EXPECT_NEAR(run_qcfa_exact(c.machine, encode_plain(parse_bits("10"))).accept_prob, 1.0, 1e-12);
}

TEST(MonteCarlo, DeterministicMatchesExactly) {
    const MachineSpec d = walk_to_end();
    const Tape tape = parse_tape("¢010$");
    const RunResult a = run_deterministic(d, tape);
    const RunResult b = run_monte_carlo(d, tape, 1000, 100, 5);
    EXPECT_EQ(b.accept_prob, a.accept_prob);
    EXPECT_EQ(b.steps_max, a.steps_max);
}

TEST(MonteCarlo, FairBranchWithinThreeSigma) {
    const RunResult r = run_monte_carlo(fair_branch(), parse_tape("¢$"), 10, 1'000'000, 42);
    EXPECT_NEAR(r.accept_prob, 0.5, 0.003);
}

TEST(MonteCarlo, SeedReproducible) {
    const RunResult a = run_monte_carlo(fair_branch(), parse_tape("¢$"), 10, 5000, 9);
    const RunResult b = run_monte_carlo(fair_branch(), parse_tape("¢$"), 10, 5000, 9);
    EXPECT_EQ(a.accept_prob, b.accept_prob);
}

TEST(MonteCarlo, FingerprintOneSided) {
    const CompiledMachine c = build_eq_fingerprint_2pfa(4);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const RunResult r = run_monte_carlo(c.machine, encode_pair(parse_bits("1011"), parse_bits("1011")),
                                            1000, 2000, seed);
        EXPECT_EQ(r.accept_prob, 1.0);
    }
}

TEST(SpaceBits, Examples) {
    MachineSpec m = walk_to_end();
    m.classical_state_count = 8;
    EXPECT_DOUBLE_EQ(space_bits(m), 3.0);
    m.classical_state_count = 4;
    m.quantum_dim = 2;
    EXPECT_DOUBLE_EQ(space_bits(m), 3.0);
}

TEST(MassConservation, EveryStep) {
    const CompiledMachine eq = build_eq_fingerprint_2pfa(4);
    const CompiledMachine gr = compile_and_oracle_program(grover_program(4));
    double worst = 0.0;
    auto observe = [&](std::uint64_t, double live, double halted, double dropped) {
        worst = std::max(worst, std::abs(live + halted + dropped - 1.0));
    };
    run_probabilistic_exact(eq.machine, encode_pair(parse_bits("0110"), parse_bits("0100")), kDefaultStepCap,
                            observe);
    run_qcfa_exact(gr.machine, encode_pair(parse_bits("0110"), parse_bits("0100")), kDefaultStepCap,
                   kDefaultPruneEps, observe);
    EXPECT_LE(worst, 1e-9);
}
