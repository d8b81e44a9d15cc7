#include "twoway/comm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "machines/engine_core.hpp"

namespace twoway {

std::string_view party_name(Party p) { return p == Party::Alice ? "alice" : "bob"; }

std::string_view comm_mode_name(CommMode m) { return m == CommMode::Exact ? "exact" : "sample"; }

CommMode parse_comm_mode(std::string_view name) {
    if (name == "exact") return CommMode::Exact;
    if (name == "sample") return CommMode::Sample;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::optional<Party> RegionSplit::exclusive_owner(std::size_t cell) const {
    if (cell <= n) return Party::Alice;
    if (cell <= 2 * n) return std::nullopt;
    return Party::Bob;
}

static std::uint64_t ceil_log2(std::uint64_t v) {
    std::uint64_t bits = 0;
    while (bits < 64 && (std::uint64_t{1} << bits) < v) ++bits;
    return bits;
}

std::uint64_t message_bits(const MachineSpec& m) { return ceil_log2(m.classical_state_count); }

std::uint64_t message_qubits(const MachineSpec& m) {
    return ceil_log2(std::max<std::uint64_t>(m.quantum_dim, 1));
}

namespace {

struct CrossingTracker {
    struct Tag {
        Party owner = Party::Alice;
        std::vector<CrossingMessage> worst;
        // conditional expectation of the message count given this configuration
        double expected_messages = 0.0;
    };

    RegionSplit split;
    std::uint64_t bits = 0, qubits = 0;

    std::vector<CrossingMessage> worst;
    bool any = false;
    double expected_messages = 0.0;

    Tag initial() const { return {}; }

    void step(Tag& tag, std::uint64_t step, std::size_t, std::size_t to_head, StateId next) const {
        const auto owner = split.exclusive_owner(to_head);
        if (!owner || *owner == tag.owner) return;
        tag.worst.push_back({tag.owner, *owner, step, bits, qubits, next});
        tag.expected_messages += 1.0;
        tag.owner = *owner;
    }

    void merge(Tag& into, double into_mass, const Tag& from, double from_mass) const {
        if (into.owner != from.owner) throw std::logic_error("configurations merged across parties");
        const double total = into_mass + from_mass;
        if (total > 0.0) {
            into.expected_messages =
                (into.expected_messages * into_mass + from.expected_messages * from_mass) / total;
        }
        if (from.worst.size() > into.worst.size()) into.worst = from.worst;
    }

    void finish(const Tag& tag, double mass, detail::Fate, std::uint64_t) {
        if (mass <= 0.0) return;
        expected_messages += mass * tag.expected_messages;
        if (!any || tag.worst.size() > worst.size()) worst = tag.worst;
        any = true;
    }
};

}  // namespace

CommTranscript simulate_crossing_protocol(const MachineSpec& m, const Bits& x, const Bits& y, CommMode mode,
                                          std::uint64_t seed, std::uint64_t step_cap) {
    const Tape tape = encode_pair(x, y);
    CrossingTracker tracker;
    tracker.split.n = x.size();
    tracker.bits = message_bits(m);
    tracker.qubits = message_qubits(m);

    CommTranscript t;
    t.mode = mode;
    t.n = x.size();
    if (mode == CommMode::Exact) {
        switch (m.kind) {
        case MachineKind::Deterministic:
            t.output = detail::deterministic_walk(m, tape, step_cap, tracker);
            break;
        case MachineKind::Probabilistic:
            t.output = detail::probabilistic_exact(m, tape, step_cap, tracker, {});
            break;
        case MachineKind::QuantumClassical:
            t.output = detail::qcfa_exact(m, tape, step_cap, kDefaultPruneEps, tracker, {});
            break;
        }
    } else {
        std::mt19937_64 rng(detail::trial_seed(seed, 0));
        const detail::Trajectory tr = detail::sample_trajectory(m, tape, step_cap, rng, tracker);
        RunResult& r = t.output;
        r.accept_prob = tr.fate == detail::Fate::Accept ? 1.0 : 0.0;
        r.reject_prob = tr.fate == detail::Fate::Reject ? 1.0 : 0.0;
        r.nonhalt_prob = 1.0 - r.accept_prob - r.reject_prob;
        r.steps_max = tr.steps;
        r.steps_expected = static_cast<double>(tr.steps);
        r.space_bits = space_bits(m);
        if (m.is_query_start) r.queries_used = tr.queries;
    }
    t.messages = tracker.worst;
    t.total_bits = tracker.bits * t.messages.size();
    t.total_qubits = tracker.qubits * t.messages.size();
    std::uint64_t alternations = 0;
    for (std::size_t i = 1; i < t.messages.size(); ++i) alternations += t.messages[i].from != t.messages[i - 1].from;
    t.rounds = alternations + 1;
    t.expected_bits = tracker.expected_messages * static_cast<double>(tracker.bits);
    return t;
}

CommCostReport comm_cost_report(const CommTranscript& t, const MachineSpec& m) {
    CommCostReport r;
    r.total_bits = t.total_bits;
    r.total_qubits = t.total_qubits;
    r.crossings = t.messages.size();
    r.steps_max = t.output.steps_max;
    r.bits_per_message = message_bits(m);
    const double n = static_cast<double>(std::max<std::size_t>(t.n, 1));
    const double allowed = static_cast<double>(r.steps_max) / n + 1.0;
    r.crossing_bound_ok = static_cast<double>(r.crossings) <= allowed;
    r.bits_bound_ok = static_cast<double>(r.total_bits) <= static_cast<double>(r.bits_per_message) * allowed;
    r.separation_ok = true;
    for (std::size_t i = 1; i < t.messages.size(); ++i) {
        if (t.messages[i].step_index < t.messages[i - 1].step_index + t.n) r.separation_ok = false;
    }
    return r;
}

}  // namespace twoway
