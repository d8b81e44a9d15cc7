#include <cmath>
#include <random>
#include <sstream>

#include "twoway/bench.hpp"
#include "twoway/comm.hpp"

namespace twoway {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

MachineSpec fair_branch_machine() {
    TransitionTable t;
    t.accepting = {1};
    t.rejecting = {2};
    t.entries.push_back({{0, Symbol::LeftEnd}, Distribution{{0.5, {1, Move::Stay}}, {0.5, {2, Move::Stay}}}});
    return make_table_machine(MachineKind::Probabilistic, 3, 0, 0, std::nullopt, std::move(t));
}

CheckResult mass_conservation() {
    CheckResult res{"mass-conservation", true, ""};
    double worst = 0.0;
    auto watch = [&](std::uint64_t, double live, double halted, double dropped) {
        worst = std::max(worst, std::abs(live + halted + dropped - 1.0));
    };
    const CompiledMachine eq = build_eq_fingerprint_2pfa(4);
    for (const auto& [x, y] : input_pairs(4, 0, 16, 11)) run_probabilistic_exact(eq.machine, encode_pair(x, y), kDefaultStepCap, watch);
    const CompiledMachine grover = compile_and_oracle_program(grover_program(4));
    for (const auto& [x, y] : input_pairs(4, 0, 6, 12)) {
        run_qcfa_exact(grover.machine, encode_pair(x, y), kDefaultStepCap, kDefaultPruneEps, watch);
    }
    const CompiledMachine parity = compile_query_program(parity2_program());
    for (const Bits& x : all_bit_strings(2)) run_qcfa_exact(parity.machine, encode_plain(x), kDefaultStepCap, kDefaultPruneEps, watch);
    res.passed = worst <= default_tolerance().tol_prob;
    res.detail = "max |live + halted + dropped - 1| = " + fmt(worst);
    return res;
}

CheckResult unitarity_and_measurements(std::uint64_t seed) {
    CheckResult res{"unitarity-and-measurement", true, ""};
    const TolerancePolicy& tol = default_tolerance();
    std::mt19937_64 rng(seed);
    std::size_t ops = 0, measurements = 0;
    for (std::size_t d = 1; d <= 12; ++d) {
        const UnitaryOp u = random_unitary(d, rng);
        res.passed &= check_unitary(u.to_matrix(), tol);
        const StateVector v = random_state(d, rng);
        const StateVector back = apply_unitary(u, apply_unitary(u.adjoint(), v));
        res.passed &= back.max_deviation(v) <= tol.tol_norm;
        res.passed &= std::abs(apply_unitary(u, v).norm_squared() - 1.0) <= tol.tol_norm;
        ++ops;
    }
    for (const CompiledMachine& c : {compile_query_program(parity2_program()),
                                     compile_and_oracle_program(grover_program(4))}) {
        const TransitionTable table = materialize_table(c.machine);
        std::mt19937_64 local(seed + 1);
        for (const auto& [key, action] : table.entries) {
            if (const auto* u = std::get_if<UnitaryAction>(&action)) {
                if (u->op) res.passed &= check_unitary(u->op->to_matrix(), tol);
                ++ops;
            } else if (const auto* m = std::get_if<MeasureAction>(&action)) {
                std::vector<Matrix> projectors;
                for (std::size_t k = 0; k < m->measurement->outcome_count(); ++k) {
                    projectors.push_back(m->measurement->projector(k));
                }
                try {
                    ProjectiveMeasurement::from_projectors(projectors, m->measurement->labels(), tol);
                } catch (const InvalidMeasurementError&) {
                    res.passed = false;
                }
                double total = 0.0;
                for (const auto& o : measure(*m->measurement, random_state(m->measurement->dim(), local), tol)) {
                    res.passed &= o.probability >= -tol.tol_prob && o.probability <= 1.0 + tol.tol_prob;
                    total += o.probability;
                }
                res.passed &= std::abs(total - 1.0) <= tol.tol_prob;
                ++measurements;
            }
        }
    }
    res.detail = std::to_string(ops) + " operators, " + std::to_string(measurements) + " measurements";
    return res;
}

CheckResult monte_carlo_agreement(std::uint64_t seed, std::uint64_t trials) {
    CheckResult res{"monte-carlo-agreement", true, ""};
    struct Case {
        MachineSpec m;
        Tape tape;
    };
    const CompiledMachine grover = compile_and_oracle_program(grover_program(4));
    std::vector<Case> cases{
        {fair_branch_machine(), parse_tape("<01>")},
        {build_eq_fingerprint_2pfa(4).machine, encode_pair(parse_bits("0001"), parse_bits("0111"))},
        {compile_query_program(parity2_program()).machine, parse_tape("<10>")},
        {grover.machine, encode_pair(parse_bits("1100"), parse_bits("0100"))},
    };
    double worst_margin = -1.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const RunResult exact = run_exact(cases[i].m, cases[i].tape);
        const RunResult mc = run_monte_carlo(cases[i].m, cases[i].tape, kDefaultStepCap, trials, seed + i);
        const double p = exact.accept_prob;
        const double allowed = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) + 0.002;
        const double gap = std::abs(mc.accept_prob - p);
        worst_margin = std::max(worst_margin, gap - allowed);
        res.passed &= gap <= allowed;
    }
    res.detail = "worst (gap - allowed) = " + fmt(worst_margin) + " over " + std::to_string(trials) + " trials";
    return res;
}

// Bottom-up evaluation with a lookup table for the three-input gate.
int ne_by_table(Bits level) {
    constexpr int gate[8] = {0, 1, 1, 1, 1, 1, 1, 0};
    while (level.size() > 1) {
        Bits next;
        for (std::size_t i = 0; i < level.size(); i += 3) next.push_back(gate[level[i] * 4 + level[i + 1] * 2 + level[i + 2]]);
        level = std::move(next);
    }
    return level.front();
}

CheckResult ne_table() {
    CheckResult res{"ne-table", true, ""};
    std::size_t checked = 0;
    for (int d = 0; d <= 2; ++d) {
        const std::size_t len = d == 0 ? 1 : (d == 1 ? 3 : 9);
        for (const Bits& bits : all_bit_strings(len)) {
            const int v = ne_eval(d, bits);
            res.passed &= v == ne_by_table(bits);
            res.passed &= rne_predicate(bits, Bits(len, 1), d) == v;
            if (d >= 1) {
                const std::size_t third = len / 3;
                Bits rotated(bits.begin() + third, bits.end());
                rotated.insert(rotated.end(), bits.begin(), bits.begin() + third);
                res.passed &= ne_eval(d, rotated) == v;
            }
            ++checked;
        }
    }
    res.detail = std::to_string(checked) + " inputs";
    return res;
}

CheckResult member_agreement() {
    CheckResult res{"member-agreement", true, ""};
    const LanguageId leq{Language::Eq, 4}, lint{Language::Int, 4};
    const CompiledMachine eq = build_eq_fingerprint_2pfa(4);
    const CompiledMachine grover = compile_and_oracle_program(grover_program(4));
    double worst_eq = 0.0, worst_int_member = 1.0, worst_int_non = 0.0;
    for (const auto& [x, y] : input_pairs(4, 4, 0, 0)) {
        const Tape tape = encode_pair(x, y);
        const double a = run_probabilistic_exact(eq.machine, tape).accept_prob;
        const double expect = member(leq, tape) ? 1.0 : fingerprint_accept_formula(x, y, PrimeRange::LeN2);
        worst_eq = std::max(worst_eq, std::abs(a - expect));
        const double g = run_qcfa_exact(grover.machine, tape).accept_prob;
        if (member(lint, tape)) worst_int_member = std::min(worst_int_member, g);
        else worst_int_non = std::max(worst_int_non, g);
    }
    res.passed = worst_eq <= 1e-9 && worst_int_member >= 2.0 / 3.0 && worst_int_non == 0.0;

    const CompiledMachine parity = compile_query_program(parity2_program());
    for (const Bits& x : all_bit_strings(2)) {
        res.passed &= std::abs(run_qcfa_exact(parity.machine, encode_plain(x)).accept_prob - (x[0] ^ x[1])) <= 1e-9;
    }
    // form checker against the shape predicate on every tape over {0,1,#} up to length 7
    const MachineSpec fc = build_form_checker(2, TapeShape::Pair);
    const Symbol alphabet[3] = {Symbol::Zero, Symbol::One, Symbol::Hash};
    for (std::size_t len = 0; len <= 7; ++len) {
        std::size_t count = 1;
        for (std::size_t i = 0; i < len; ++i) count *= 3;
        for (std::size_t code = 0; code < count; ++code) {
            Tape t{Symbol::LeftEnd};
            for (std::size_t i = 0, c = code; i < len; ++i, c /= 3) t.push_back(alphabet[c % 3]);
            t.push_back(Symbol::RightEnd);
            const bool shaped = decode_pair(t).has_value() && len == 6;
            res.passed &= (run_deterministic(fc, t).accept_prob == 1.0) == shaped;
        }
    }
    res.detail = "eq |accept - formula| <= " + fmt(worst_eq) + ", int member min " + fmt(worst_int_member) +
                 ", int non-member max " + fmt(worst_int_non);
    return res;
}

CheckResult determinism_embedding() {
    CheckResult res{"determinism-embedding", true, ""};
    const MachineSpec fc = build_form_checker(3, TapeShape::Pair);
    const MachineSpec pfa = lift_to_probabilistic(fc), qcfa = lift_to_quantum(fc);
    for (const char* text : {"<011###101>", "<01###101>", "<011##101>", "<>", "<011###1010>"}) {
        const Tape t = parse_tape(text);
        const RunResult d = run_deterministic(fc, t);
        const RunResult p = run_probabilistic_exact(pfa, t);
        const RunResult q = run_qcfa_exact(qcfa, t);
        res.passed &= d.accept_prob == p.accept_prob && d.accept_prob == q.accept_prob;
        res.passed &= d.steps_max == p.steps_max && d.steps_max == q.steps_max;
    }
    return res;
}

CheckResult halting_convention() {
    CheckResult res{"halting-convention", true, ""};
    auto guarded = [&res](MachineSpec m) {
        m.transition = [inner = m.transition, flags = m.flags, &res](StateId s, Symbol sym) {
            if (flags(s) != StateFlag::Neither) res.passed = false;
            return inner(s, sym);
        };
        return m;
    };
    const MachineSpec eq = guarded(build_eq_fingerprint_2pfa(4).machine);
    const MachineSpec grover = guarded(compile_and_oracle_program(grover_program(4)).machine);
    for (const auto& [x, y] : input_pairs(4, 0, 8, 5)) {
        run_exact(eq, encode_pair(x, y));
        run_exact(grover, encode_pair(x, y));
        run_monte_carlo(grover, encode_pair(x, y), kDefaultStepCap, 20, 3);
    }
    return res;
}

CheckResult comm_transparency() {
    CheckResult res{"comm-transparency", true, ""};
    const CompiledMachine eq = build_eq_fingerprint_2pfa(4);
    const CompiledMachine grover = compile_and_oracle_program(grover_program(4));
    for (const auto& [x, y] : input_pairs(4, 0, 8, 9)) {
        for (const CompiledMachine* c : {&eq, &grover}) {
            const RunResult plain = run_exact(c->machine, encode_pair(x, y));
            const CommTranscript t = simulate_crossing_protocol(c->machine, x, y, CommMode::Exact);
            res.passed &= plain.accept_prob == t.output.accept_prob && plain.steps_max == t.output.steps_max &&
                          plain.steps_expected == t.output.steps_expected;
            const CommCostReport r = comm_cost_report(t, c->machine);
            res.passed &= r.bits_bound_ok && r.crossing_bound_ok && r.separation_ok;
        }
    }
    return res;
}

}  // namespace

std::vector<CheckResult> run_property_checks(std::uint64_t seed, std::uint64_t trials) {
    return {mass_conservation(),  unitarity_and_measurements(seed), monte_carlo_agreement(seed, trials),
            ne_table(),           member_agreement(),               determinism_embedding(),
            halting_convention(), comm_transparency()};
}

}  // namespace twoway
