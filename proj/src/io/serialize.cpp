#include "twoway/serialize.hpp"

#include <stdexcept>

#include "twoway/compile.hpp"

namespace twoway {

using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json complex_list(std::span<const Complex> v) {
    json out = json::array();
    for (const Complex& z : v) out.push_back(complex_json(z));
    return out;
}

std::vector<Complex> complex_list_from(const json& j) {
    std::vector<Complex> out;
    for (const json& z : j) out.push_back(complex_from(z));
    return out;
}

json grid_json(const Matrix& g) {
    json rows = json::array();
    for (std::size_t r = 0; r < g.dim(); ++r) rows.push_back(complex_list(g.data().subspan(r * g.dim(), g.dim())));
    return rows;
}

Matrix grid_from(const json& j) {
    std::vector<std::vector<Complex>> rows;
    for (const json& r : j) rows.push_back(complex_list_from(r));
    return Matrix::from_rows(rows);
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    return j.at(key);
}

json move_json(const ClassicalMove& mv) { return {{"next", mv.next}, {"move", static_cast<int>(mv.move)}}; }

ClassicalMove move_from(const json& j) {
    const int mv = field(j, "move").get<int>();
    if (mv < -1 || mv > 1) throw std::invalid_argument("move must be -1, 0 or 1");
    return {field(j, "next").get<StateId>(), static_cast<Move>(mv)};
}

json action_json(const Action& a) {
    if (const auto* mv = std::get_if<ClassicalMove>(&a)) {
        json j = move_json(*mv);
        j["type"] = "move";
        return j;
    }
    if (const auto* d = std::get_if<Distribution>(&a)) {
        json choices = json::array();
        for (const WeightedMove& w : *d) {
            json c = move_json(w.to);
            c["weight"] = w.weight;
            choices.push_back(c);
        }
        return {{"type", "distribution"}, {"choices", choices}};
    }
    if (const auto* u = std::get_if<UnitaryAction>(&a)) {
        json j = move_json(u->then);
        j["type"] = "unitary";
        j["unitary"] = u->op ? unitary_to_json(*u->op) : json(nullptr);
        return j;
    }
    const auto& m = std::get<MeasureAction>(a);
    json moves = json::array();
    for (const ClassicalMove& mv : m.per_outcome) moves.push_back(move_json(mv));
    return {{"type", "measure"}, {"measurement", measurement_to_json(*m.measurement)}, {"moves", moves}};
}

Action action_from(const json& j) {
    const std::string type = field(j, "type").get<std::string>();
    if (type == "move") return move_from(j);
    if (type == "distribution") {
        Distribution d;
        for (const json& c : field(j, "choices")) d.push_back({field(c, "weight").get<double>(), move_from(c)});
        return d;
    }
    if (type == "unitary") {
        const json& op = field(j, "unitary");
        return UnitaryAction{op.is_null() ? nullptr : std::make_shared<const UnitaryOp>(unitary_from_json(op)),
                             move_from(j)};
    }
    if (type == "measure") {
        MeasureAction m{std::make_shared<const ProjectiveMeasurement>(measurement_from_json(field(j, "measurement"))),
                        {}};
        for (const json& mv : field(j, "moves")) m.per_outcome.push_back(move_from(mv));
        return m;
    }
    throw std::invalid_argument("unknown action type '" + type + "'");
}

Symbol symbol_from(const std::string& text) {
    for (Symbol s : kAllSymbols) {
        if (symbol_text(s) == text) return s;
    }
    throw std::invalid_argument("bad symbol '" + text + "'");
}

json continuation_json(const Continuation& c) {
    switch (c.kind) {
    case Continuation::Kind::Accept: return {{"kind", "accept"}};
    case Continuation::Kind::Reject: return {{"kind", "reject"}};
    case Continuation::Kind::Next: return {{"kind", "next"}};
    case Continuation::Kind::Verify: return {{"kind", "verify"}, {"index", c.index}};
    }
    return nullptr;
}

Continuation continuation_from(const json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "accept") return Continuation::accept();
    if (kind == "reject") return Continuation::reject();
    if (kind == "next") return Continuation::next();
    if (kind == "verify") return Continuation::verify(field(j, "index").get<std::size_t>());
    throw std::invalid_argument("unknown continuation '" + kind + "'");
}

}  // namespace

json state_to_json(const StateVector& v) { return complex_list(v.amplitudes()); }

StateVector state_from_json(const json& j) { return StateVector(complex_list_from(j)); }

json unitary_to_json(const UnitaryOp& u) {
    switch (u.form()) {
    case UnitaryOp::Form::Dense: return {{"form", "dense"}, {"grid", grid_json(u.dense_grid())}};
    case UnitaryOp::Form::Diagonal: return {{"form", "diagonal"}, {"phases", complex_list(u.phases())}};
    case UnitaryOp::Form::Monomial:
        return {{"form", "monomial"}, {"perm", u.permutation()}, {"phases", complex_list(u.phases())}};
    }
    return nullptr;
}

UnitaryOp unitary_from_json(const json& j) {
    const std::string form = field(j, "form").get<std::string>();
    if (form == "dense") return UnitaryOp::dense(grid_from(field(j, "grid")));
    if (form == "diagonal") return UnitaryOp::diagonal(complex_list_from(field(j, "phases")));
    if (form == "monomial") {
        return UnitaryOp::monomial(field(j, "perm").get<std::vector<std::size_t>>(),
                                   complex_list_from(field(j, "phases")));
    }
    throw std::invalid_argument("unknown operator form '" + form + "'");
}

json measurement_to_json(const ProjectiveMeasurement& m) {
    if (m.is_basis_partition()) {
        return {{"form", "basis"}, {"partition", m.partition()}, {"labels", m.labels()}};
    }
    json projectors = json::array();
    for (const Matrix& p : m.dense_projectors()) projectors.push_back(grid_json(p));
    return {{"form", "dense"}, {"projectors", projectors}, {"labels", m.labels()}};
}

ProjectiveMeasurement measurement_from_json(const json& j) {
    const std::string form = field(j, "form").get<std::string>();
    auto labels = field(j, "labels").get<std::vector<int>>();
    if (form == "basis") {
        return ProjectiveMeasurement::basis_partition(field(j, "partition").get<std::vector<std::size_t>>(),
                                                      std::move(labels));
    }
    if (form == "dense") {
        std::vector<Matrix> projectors;
        for (const json& g : field(j, "projectors")) projectors.push_back(grid_from(g));
        return ProjectiveMeasurement::from_projectors(std::move(projectors), std::move(labels));
    }
    throw std::invalid_argument("unknown measurement form '" + form + "'");
}

json program_to_json(const QueryProgram& p) {
    json ins = json::array();
    for (const Instruction& i : p.instructions) {
        if (const auto* u = std::get_if<ApplyUnitary>(&i)) {
            ins.push_back({{"op", "unitary"}, {"unitary", unitary_to_json(*u->op)}});
        } else if (std::holds_alternative<OracleCall>(i)) {
            ins.push_back({{"op", "oracle"}});
        } else if (const auto* r = std::get_if<ResetStep>(&i)) {
            ins.push_back({{"op", "reset"}, {"state", state_to_json(r->state)}});
        } else {
            const auto& ms = std::get<MeasureStep>(i);
            json cont = json::array();
            for (const Continuation& c : ms.per_outcome) cont.push_back(continuation_json(c));
            ins.push_back({{"op", "measure"},
                           {"measurement", measurement_to_json(*ms.measurement)},
                           {"continuations", cont}});
        }
    }
    return {{"format", "query-program"},
            {"version", 1},
            {"n", p.n},
            {"m", p.m},
            {"start", state_to_json(p.start)},
            {"instructions", ins},
            {"final_measurement", p.final_measurement ? measurement_to_json(*p.final_measurement) : json(nullptr)}};
}

QueryProgram program_from_json(const json& j) {
    if (field(j, "format") != "query-program") throw std::invalid_argument("not a query-program document");
    if (field(j, "version") != 1) throw std::invalid_argument("unsupported query-program version");
    QueryProgram p;
    p.n = field(j, "n").get<std::size_t>();
    p.m = field(j, "m").get<std::size_t>();
    p.start = state_from_json(field(j, "start"));
    for (const json& i : field(j, "instructions")) {
        const std::string op = field(i, "op").get<std::string>();
        if (op == "unitary") {
            p.instructions.push_back(ApplyUnitary{std::make_shared<const UnitaryOp>(unitary_from_json(field(i, "unitary")))});
        } else if (op == "oracle") {
            p.instructions.push_back(OracleCall{});
        } else if (op == "reset") {
            p.instructions.push_back(ResetStep{state_from_json(field(i, "state"))});
        } else if (op == "measure") {
            MeasureStep ms{std::make_shared<const ProjectiveMeasurement>(measurement_from_json(field(i, "measurement"))),
                           {}};
            for (const json& c : field(i, "continuations")) ms.per_outcome.push_back(continuation_from(c));
            p.instructions.push_back(std::move(ms));
        } else {
            throw std::invalid_argument("unknown instruction '" + op + "'");
        }
    }
    const json& fm = field(j, "final_measurement");
    if (!fm.is_null()) p.final_measurement = std::make_shared<const ProjectiveMeasurement>(measurement_from_json(fm));
    p.validate();
    return p;
}

json machine_to_json(const MachineSpec& m) {
    json j = {{"format", "twoway-machine"},
              {"version", 1},
              {"kind", kind_name(m.kind)},
              {"classical_state_count", m.classical_state_count},
              {"quantum_dim", m.quantum_dim},
              {"initial_classical", m.initial_classical},
              {"initial_quantum", m.initial_quantum ? state_to_json(*m.initial_quantum) : json(nullptr)}};
    if (m.builder) {
        j["builder"] = {{"name", m.builder->name}, {"params", m.builder->params}};
        return j;
    }
    const TransitionTable table = materialize_table(m);
    json entries = json::array();
    for (const auto& [key, action] : table.entries) {
        entries.push_back({{"state", key.first}, {"symbol", symbol_text(key.second)}, {"action", action_json(action)}});
    }
    j["table"] = {{"accepting", table.accepting}, {"rejecting", table.rejecting}, {"entries", entries}};
    return j;
}

MachineSpec machine_from_json(const json& j) {
    if (field(j, "format") != "twoway-machine") throw std::invalid_argument("not a twoway-machine document");
    if (field(j, "version") != 1) throw std::invalid_argument("unsupported machine document version");
    const MachineKind kind = parse_kind(field(j, "kind").get<std::string>());
    const auto states = field(j, "classical_state_count").get<std::uint64_t>();
    const auto qdim = field(j, "quantum_dim").get<std::size_t>();
    const auto init = field(j, "initial_classical").get<StateId>();
    std::optional<StateVector> q0;
    if (!field(j, "initial_quantum").is_null()) q0 = state_from_json(j.at("initial_quantum"));

    MachineSpec m;
    if (j.contains("builder")) {
        const json& b = j.at("builder");
        const std::string name = field(b, "name").get<std::string>();
        const json& params = field(b, "params");
        if (name == "eq_fingerprint") {
            m = build_eq_fingerprint_2pfa(field(params, "n").get<std::size_t>(),
                                          parse_prime_range(field(params, "prime_range").get<std::string>()))
                    .machine;
        } else if (name == "form_checker") {
            m = build_form_checker(field(params, "n").get<std::size_t>(),
                                   parse_shape(field(params, "shape").get<std::string>()));
        } else if (name == "compile_query") {
            m = compile_query_program(program_from_json(field(params, "program"))).machine;
        } else if (name == "compile_and_oracle") {
            m = compile_and_oracle_program(program_from_json(field(params, "program"))).machine;
        } else {
            throw std::invalid_argument("unknown builder '" + name + "'");
        }
        if (m.kind != kind || m.classical_state_count != states || m.quantum_dim != qdim ||
            m.initial_classical != init || m.initial_quantum != q0) {
            throw std::invalid_argument("builder output disagrees with the declared header");
        }
        return m;
    }
    const json& t = field(j, "table");
    TransitionTable table;
    table.accepting = field(t, "accepting").get<std::vector<StateId>>();
    table.rejecting = field(t, "rejecting").get<std::vector<StateId>>();
    for (const json& e : field(t, "entries")) {
        table.entries.push_back({{field(e, "state").get<StateId>(), symbol_from(field(e, "symbol").get<std::string>())},
                                 action_from(field(e, "action"))});
    }
    return make_table_machine(kind, states, qdim, init, std::move(q0), std::move(table));
}

json run_result_to_json(const RunResult& r) {
    return {{"accept_prob", r.accept_prob},
            {"reject_prob", r.reject_prob},
            {"nonhalt_prob", r.nonhalt_prob},
            {"steps_max", r.steps_max},
            {"steps_expected", r.steps_expected},
            {"space_bits", r.space_bits},
            {"queries_used", r.queries_used ? json(*r.queries_used) : json(nullptr)}};
}

RunResult run_result_from_json(const json& j) {
    RunResult r;
    r.accept_prob = field(j, "accept_prob").get<double>();
    r.reject_prob = field(j, "reject_prob").get<double>();
    r.nonhalt_prob = field(j, "nonhalt_prob").get<double>();
    r.steps_max = field(j, "steps_max").get<std::uint64_t>();
    r.steps_expected = field(j, "steps_expected").get<double>();
    r.space_bits = field(j, "space_bits").get<double>();
    if (!field(j, "queries_used").is_null()) r.queries_used = j.at("queries_used").get<std::uint64_t>();
    return r;
}

json transcript_to_json(const CommTranscript& t) {
    json messages = json::array();
    for (const CrossingMessage& m : t.messages) {
        messages.push_back({{"from", party_name(m.from)},
                            {"to", party_name(m.to)},
                            {"step", m.step_index},
                            {"classical_bits", m.classical_bits},
                            {"qubits", m.qubits},
                            {"state", m.state}});
    }
    return {{"mode", comm_mode_name(t.mode)},
            {"n", t.n},
            {"messages", messages},
            {"crossings", t.messages.size()},
            {"total_bits", t.total_bits},
            {"total_qubits", t.total_qubits},
            {"rounds", t.rounds},
            {"expected_bits", t.expected_bits},
            {"output", run_result_to_json(t.output)}};
}

}  // namespace twoway
