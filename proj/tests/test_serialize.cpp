#include <random>

#include <gtest/gtest.h>

#include "twoway/comm.hpp"
#include "twoway/compile.hpp"
#include "twoway/langs.hpp"
#include "twoway/serialize.hpp"

using namespace twoway;

TEST(Json, StateAndUnitaryRoundTrip) {
    std::mt19937_64 rng(1);
    const StateVector v = random_state(5, rng);
    EXPECT_EQ(state_from_json(state_to_json(v)), v);
    const UnitaryOp u = random_unitary(4, rng);
    EXPECT_EQ(unitary_from_json(unitary_to_json(u)).to_matrix(), u.to_matrix());
    const UnitaryOp mono = UnitaryOp::monomial({2, 0, 1}, {1.0, -1.0, Complex(0, 1)});
    const UnitaryOp back = unitary_from_json(unitary_to_json(mono));
    EXPECT_EQ(back.form(), UnitaryOp::Form::Monomial);
    EXPECT_EQ(back.to_matrix(), mono.to_matrix());
    EXPECT_THROW(unitary_from_json(nlohmann::json{{"form", "diagonal"}, {"phases", {{0.5, 0.0}}}}), NonUnitaryError);
}

TEST(Json, ProgramRoundTrip) {
    std::mt19937_64 rng(2);
    const QueryProgram p = random_straight_line_program(3, 2, 3, rng);
    const nlohmann::json doc = program_to_json(p);
    EXPECT_EQ(program_to_json(program_from_json(doc)), doc);
    const QueryProgram g = grover_program(4);
    EXPECT_EQ(program_to_json(program_from_json(program_to_json(g))), program_to_json(g));
    for (const Bits& x : all_bit_strings(3)) {
        EXPECT_EQ(run_query_program(program_from_json(doc), x).accept_prob, run_query_program(p, x).accept_prob);
    }
}

TEST(Json, BuilderMachinesRoundTrip) {
    const std::vector<MachineSpec> machines = {
        build_eq_fingerprint_2pfa(4, PrimeRange::OpenInterval).machine,
        build_form_checker(3, TapeShape::Plain),
        compile_query_program(parity2_program()).machine,
        compile_and_oracle_program(grover_program(4)).machine,
    };
    for (const MachineSpec& m : machines) {
        const nlohmann::json doc = machine_to_json(m);
        ASSERT_TRUE(doc.contains("builder"));
        const MachineSpec back = machine_from_json(doc);
        EXPECT_EQ(machine_to_json(back), doc);
        EXPECT_EQ(back.classical_state_count, m.classical_state_count);
    }
}

TEST(Json, TableMachineRoundTrip) {
    const MachineSpec lifted = lift_to_quantum(build_form_checker(2, TapeShape::Pair));
    const nlohmann::json doc = machine_to_json(lifted);
    ASSERT_TRUE(doc.contains("table"));
    const MachineSpec back = machine_from_json(doc);
    EXPECT_EQ(machine_to_json(back), doc);
    const Tape tape = encode_pair(parse_bits("01"), parse_bits("10"));
    EXPECT_EQ(run_exact(back, tape).accept_prob, run_exact(lifted, tape).accept_prob);
    EXPECT_EQ(machine_to_json(machine_from_json(nlohmann::json::parse(doc.dump()))), doc);
}

TEST(Json, SchemaErrors) {
    nlohmann::json doc = machine_to_json(build_form_checker(2, TapeShape::Pair));
    doc["format"] = "other";
    EXPECT_THROW(machine_from_json(doc), std::invalid_argument);
    doc = machine_to_json(build_eq_fingerprint_2pfa(2).machine);
    doc["builder"]["name"] = "unknown";
    EXPECT_THROW(machine_from_json(doc), std::invalid_argument);
    doc = machine_to_json(build_eq_fingerprint_2pfa(2).machine);
    doc["classical_state_count"] = 3;
    EXPECT_THROW(machine_from_json(doc), std::invalid_argument);
}

TEST(Json, RunResultAndTranscript) {
    const CompiledMachine c = build_eq_fingerprint_2pfa(3);
    const RunResult r = run_exact(c.machine, encode_pair(parse_bits("011"), parse_bits("010")));
    const RunResult back = run_result_from_json(run_result_to_json(r));
    EXPECT_EQ(back.accept_prob, r.accept_prob);
    EXPECT_EQ(back.steps_max, r.steps_max);
    EXPECT_EQ(back.queries_used, r.queries_used);
    const CommTranscript t = simulate_crossing_protocol(c.machine, parse_bits("011"), parse_bits("011"), CommMode::Exact);
    const nlohmann::json j = transcript_to_json(t);
    EXPECT_EQ(j["messages"].size(), 1u);
    EXPECT_EQ(j["total_bits"], t.total_bits);
}
