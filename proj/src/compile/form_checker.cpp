#include <stdexcept>
#include <string>

#include "form_check_core.hpp"

namespace twoway {

std::string_view shape_name(TapeShape s) { return s == TapeShape::Pair ? "pair" : "plain"; }

TapeShape parse_shape(std::string_view name) {
    if (name == "pair") return TapeShape::Pair;
    if (name == "plain") return TapeShape::Plain;
    throw std::invalid_argument("unknown tape shape '" + std::string(name) + "'");
}

std::size_t well_formed_length(std::size_t n, TapeShape shape) {
    return (shape == TapeShape::Pair ? 3 * n : n) + 2;
}

MachineSpec build_form_checker(std::size_t n, TapeShape shape) {
    if (n == 0) throw std::invalid_argument("form checker needs n >= 1");
    const std::uint64_t locals = detail::form_check_states(n, shape);
    const StateId accept = locals, reject = locals + 1;

    MachineSpec m;
    m.kind = MachineKind::Deterministic;
    m.classical_state_count = locals + 2;
    m.initial_classical = 0;
    m.flags = [=](StateId s) {
        if (s == accept) return StateFlag::Accepting;
        if (s == reject) return StateFlag::Rejecting;
        return StateFlag::Neither;
    };
    m.transition = [=](StateId s, Symbol sym) -> Action {
        const detail::FormStep st = detail::form_check_step(n, shape, s, sym);
        switch (st.kind) {
        case detail::FormStep::Kind::Continue: return ClassicalMove{st.next, Move::Right};
        case detail::FormStep::Kind::Done: return ClassicalMove{accept, Move::Stay};
        case detail::FormStep::Kind::Fail: break;
        }
        return ClassicalMove{reject, Move::Stay};
    };
    m.builder = BuilderRef{"form_checker", {{"n", n}, {"shape", shape_name(shape)}}};
    m.validate();
    return m;
}

}  // namespace twoway
