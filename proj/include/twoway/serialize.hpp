// JSON documents for machines, query programs, run results and transcripts.
//
// Machine document:
//   {"format": "twoway-machine", "version": 1, "kind": "probabilistic",
//    "classical_state_count": 8, "quantum_dim": 0, "initial_classical": 0,
//    "initial_quantum": null | [[re, im], ...],
//    "builder": {"name": "eq_fingerprint", "params": {"n": 8, "prime_range": "le-n2"}}}
// or, instead of "builder", an explicit
//    "table": {"accepting": [..], "rejecting": [..],
//              "entries": [{"state": 0, "symbol": "¢", "action": {...}}, ...]}
// Actions:
//   {"type": "move", "next": s, "move": -1|0|1}
//   {"type": "distribution", "choices": [{"weight": w, "next": s, "move": m}, ...]}
//   {"type": "unitary", "unitary": null | OP, "next": s, "move": m}
//   {"type": "measure", "measurement": MEAS, "moves": [{"next": s, "move": m}, ...]}
// OP:   {"form": "dense", "grid": [[[re, im], ...], ...]}
//       {"form": "diagonal", "phases": [[re, im], ...]}
//       {"form": "monomial", "perm": [..], "phases": [[re, im], ...]}
// MEAS: {"form": "basis", "partition": [..], "labels": [..]}
//       {"form": "dense", "projectors": [GRID, ...], "labels": [..]}
// Builders: eq_fingerprint, form_checker, compile_query, compile_and_oracle.
#pragma once

#include <string>

#include "json.hpp"
#include "twoway/comm.hpp"
#include "twoway/machines.hpp"
#include "twoway/querymodel.hpp"

namespace twoway {

nlohmann::json state_to_json(const StateVector& v);
StateVector state_from_json(const nlohmann::json& j);
nlohmann::json unitary_to_json(const UnitaryOp& u);
UnitaryOp unitary_from_json(const nlohmann::json& j);
nlohmann::json measurement_to_json(const ProjectiveMeasurement& m);
ProjectiveMeasurement measurement_from_json(const nlohmann::json& j);

nlohmann::json program_to_json(const QueryProgram& p);
QueryProgram program_from_json(const nlohmann::json& j);

nlohmann::json machine_to_json(const MachineSpec& m);
// Throws std::invalid_argument on schema errors or unknown builders.
MachineSpec machine_from_json(const nlohmann::json& j);

nlohmann::json run_result_to_json(const RunResult& r);
RunResult run_result_from_json(const nlohmann::json& j);

nlohmann::json transcript_to_json(const CommTranscript& t);

}  // namespace twoway
