#include <algorithm>

#include "engine_core.hpp"
#include "twoway/kernels.hpp"

namespace twoway {

RunResult run_deterministic(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap) {
    if (m.kind != MachineKind::Deterministic) throw std::invalid_argument("run_deterministic needs a deterministic machine");
    detail::NullTracker tracker;
    return detail::deterministic_walk(m, tape, step_cap, tracker);
}

RunResult run_probabilistic_exact(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap,
                                  const MassObserver& observer) {
    if (m.kind == MachineKind::QuantumClassical) {
        throw std::invalid_argument("run_probabilistic_exact cannot run a 2QCFA");
    }
    detail::NullTracker tracker;
    return detail::probabilistic_exact(m, tape, step_cap, tracker, observer);
}

RunResult run_qcfa_exact(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap, double prune_eps,
                         const MassObserver& observer) {
    detail::NullTracker tracker;
    return detail::qcfa_exact(m, tape, step_cap, prune_eps, tracker, observer);
}

RunResult run_exact(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap) {
    switch (m.kind) {
    case MachineKind::Deterministic: return run_deterministic(m, tape, step_cap);
    case MachineKind::Probabilistic: return run_probabilistic_exact(m, tape, step_cap);
    case MachineKind::QuantumClassical: return run_qcfa_exact(m, tape, step_cap);
    }
    throw std::invalid_argument("unknown machine kind");
}

RunResult run_monte_carlo(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap,
                          std::uint64_t trials, std::uint64_t seed) {
    validate_tape(tape);
    if (trials == 0) throw std::invalid_argument("trials must be positive");

    // Integer tallies per chunk, so the reduction is order independent.
    struct Tally {
        std::uint64_t accept = 0, reject = 0, nonhalt = 0;
        std::uint64_t steps_sum = 0, steps_max = 0, queries_max = 0;
    };
    constexpr std::uint64_t kChunk = 256;
    const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Tally> tallies(chunks);
    kernels::parallel_for(chunks, [&](std::size_t c) {
        Tally& t = tallies[c];
        detail::NullTracker tracker;
        const std::uint64_t end = std::min<std::uint64_t>(trials, (c + 1) * kChunk);
        for (std::uint64_t trial = c * kChunk; trial < end; ++trial) {
            std::mt19937_64 rng(detail::trial_seed(seed, trial));
            const detail::Trajectory tr = detail::sample_trajectory(m, tape, step_cap, rng, tracker);
            switch (tr.fate) {
            case detail::Fate::Accept: ++t.accept; break;
            case detail::Fate::Reject: ++t.reject; break;
            default: ++t.nonhalt; break;
            }
            t.steps_sum += tr.steps;
            t.steps_max = std::max(t.steps_max, tr.steps);
            t.queries_max = std::max(t.queries_max, tr.queries);
        }
    });
    Tally total;
    for (const Tally& t : tallies) {
        total.accept += t.accept;
        total.reject += t.reject;
        total.nonhalt += t.nonhalt;
        total.steps_sum += t.steps_sum;
        total.steps_max = std::max(total.steps_max, t.steps_max);
        total.queries_max = std::max(total.queries_max, t.queries_max);
    }
    const double n = static_cast<double>(trials);
    RunResult r;
    r.accept_prob = static_cast<double>(total.accept) / n;
    r.reject_prob = static_cast<double>(total.reject) / n;
    r.nonhalt_prob = static_cast<double>(total.nonhalt) / n;
    r.steps_max = total.steps_max;
    r.steps_expected = static_cast<double>(total.steps_sum) / n;
    r.space_bits = space_bits(m);
    if (m.is_query_start) r.queries_used = total.queries_max;
    return r;
}

}  // namespace twoway
