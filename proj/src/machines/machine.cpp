#include <cmath>
#include <map>
#include <set>

#include "twoway/machines.hpp"

namespace twoway {

std::string_view kind_name(MachineKind kind) {
    switch (kind) {
    case MachineKind::Deterministic: return "deterministic";
    case MachineKind::Probabilistic: return "probabilistic";
    case MachineKind::QuantumClassical: return "quantum-classical";
    }
    return "?";
}

MachineKind parse_kind(std::string_view name) {
    if (name == "deterministic") return MachineKind::Deterministic;
    if (name == "probabilistic") return MachineKind::Probabilistic;
    if (name == "quantum-classical") return MachineKind::QuantumClassical;
    throw std::invalid_argument("unknown machine kind '" + std::string(name) + "'");
}

void MachineSpec::validate() const {
    if (classical_state_count == 0) throw std::invalid_argument("machine needs at least one state");
    if (initial_classical >= classical_state_count) {
        throw std::invalid_argument("initial state outside the declared state space");
    }
    if (!flags || !transition) throw std::invalid_argument("machine rules are not set");
    if (kind == MachineKind::QuantumClassical) {
        if (quantum_dim == 0) throw std::invalid_argument("2QCFA needs quantum_dim >= 1");
        if (!initial_quantum || initial_quantum->dim() != quantum_dim) {
            throw std::invalid_argument("2QCFA initial quantum state has the wrong dimension");
        }
        if (!initial_quantum->is_normalized()) {
            throw std::invalid_argument("2QCFA initial quantum state is not normalized");
        }
    } else if (quantum_dim != 0) {
        throw std::invalid_argument("classical machines must declare quantum_dim 0");
    }
}

MachineSpec make_table_machine(MachineKind kind, std::uint64_t classical_state_count,
                               std::size_t quantum_dim, StateId initial_classical,
                               std::optional<StateVector> initial_quantum, TransitionTable table) {
    struct Lookup {
        std::set<StateId> accepting;
        std::set<StateId> rejecting;
        std::map<std::pair<StateId, Symbol>, Action> actions;
    };
    auto lookup = std::make_shared<Lookup>();
    lookup->accepting.insert(table.accepting.begin(), table.accepting.end());
    lookup->rejecting.insert(table.rejecting.begin(), table.rejecting.end());
    for (const StateId s : lookup->accepting) {
        if (lookup->rejecting.contains(s)) {
            throw std::invalid_argument("state is both accepting and rejecting");
        }
    }
    for (auto& [key, action] : table.entries) {
        if (key.first >= classical_state_count) {
            throw std::invalid_argument("transition from undeclared state");
        }
        lookup->actions.emplace(key, std::move(action));
    }

    MachineSpec m;
    m.kind = kind;
    m.classical_state_count = classical_state_count;
    m.quantum_dim = quantum_dim;
    m.initial_classical = initial_classical;
    m.initial_quantum = std::move(initial_quantum);
    m.flags = [lookup](StateId s) {
        if (lookup->accepting.contains(s)) return StateFlag::Accepting;
        if (lookup->rejecting.contains(s)) return StateFlag::Rejecting;
        return StateFlag::Neither;
    };
    m.transition = [lookup](StateId s, Symbol sym) -> Action {
        auto it = lookup->actions.find({s, sym});
        if (it == lookup->actions.end()) {
            throw UndefinedTransition("no transition for state " + std::to_string(s) + " on '" +
                                      std::string(symbol_text(sym)) + "'");
        }
        return it->second;
    };
    m.validate();
    return m;
}

TransitionTable materialize_table(const MachineSpec& m, std::uint64_t max_states) {
    if (m.classical_state_count > max_states) {
        throw std::length_error("machine too large to materialize as a table");
    }
    TransitionTable table;
    for (StateId s = 0; s < m.classical_state_count; ++s) {
        switch (m.flags(s)) {
        case StateFlag::Accepting: table.accepting.push_back(s); continue;
        case StateFlag::Rejecting: table.rejecting.push_back(s); continue;
        case StateFlag::Neither: break;
        }
        for (Symbol sym : kAllSymbols) {
            try {
                table.entries.push_back({{s, sym}, m.transition(s, sym)});
            } catch (const UndefinedTransition&) {
            }
        }
    }
    return table;
}

MachineSpec lift_to_probabilistic(const MachineSpec& deterministic) {
    if (deterministic.kind != MachineKind::Deterministic) {
        throw std::invalid_argument("only deterministic machines can be lifted");
    }
    MachineSpec m = deterministic;
    m.kind = MachineKind::Probabilistic;
    m.builder.reset();
    m.transition = [inner = deterministic.transition](StateId s, Symbol sym) -> Action {
        return Distribution{{1.0, std::get<ClassicalMove>(inner(s, sym))}};
    };
    return m;
}

MachineSpec lift_to_quantum(const MachineSpec& deterministic) {
    if (deterministic.kind != MachineKind::Deterministic) {
        throw std::invalid_argument("only deterministic machines can be lifted");
    }
    MachineSpec m = deterministic;
    m.kind = MachineKind::QuantumClassical;
    m.quantum_dim = 1;
    m.initial_quantum = StateVector::basis(1, 0);
    m.builder.reset();
    m.transition = [inner = deterministic.transition](StateId s, Symbol sym) -> Action {
        return UnitaryAction{nullptr, std::get<ClassicalMove>(inner(s, sym))};
    };
    return m;
}

double space_bits(const MachineSpec& m) {
    const double q = static_cast<double>(std::max<std::size_t>(m.quantum_dim, 1));
    return std::log2(static_cast<double>(m.classical_state_count)) + std::log2(q);
}

}  // namespace twoway
