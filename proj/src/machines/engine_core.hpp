// Engine internals shared by the plain engines and the crossing-protocol
// harness. Every engine is parameterized by a Tracker that annotates
// configurations without influencing the probability arithmetic, so a tracked
// run produces bit-identical masses to an untracked one.
//
// Tracker interface:
//   using Tag = ...;                         // per-configuration annotation
//   Tag initial() const;
//   void step(Tag&, uint64_t step, size_t from_head, size_t to_head, StateId next);
//   void merge(Tag& into, double into_mass, const Tag& from, double from_mass);
//   void finish(const Tag&, double mass, Fate, uint64_t step);
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "twoway/machines.hpp"

namespace twoway::detail {

enum class Fate { Accept, Reject, Capped, Dropped };

struct NullTracker {
    struct Tag {};
    Tag initial() const { return {}; }
    void step(Tag&, std::uint64_t, std::size_t, std::size_t, StateId) {}
    void merge(Tag&, double, const Tag&, double) {}
    void finish(const Tag&, double, Fate, std::uint64_t) {}
};

// States whose fidelity is at least this close to 1 are merged; they differ
// at most by a global phase and so describe the same configuration.
inline constexpr double kMergeFidelity = 1.0 - 1e-12;

inline std::size_t move_head(const Tape& tape, std::size_t head, Move mv) {
    const long long next = static_cast<long long>(head) + static_cast<int>(mv);
    if (next < 0 || next >= static_cast<long long>(tape.size())) {
        throw HeadOutOfRange("head moved past an end marker");
    }
    return static_cast<std::size_t>(next);
}

inline std::uint64_t query_increment(const MachineSpec& m, StateId from, StateId to) {
    return (m.is_query_start && to != from && m.is_query_start(to)) ? 1 : 0;
}

struct Totals {
    double accept = 0.0;
    double reject = 0.0;
    double nonhalt = 0.0;
    double weighted_steps = 0.0;
    std::uint64_t steps_max = 0;
    std::uint64_t queries_max = 0;

    void record(Fate fate, double mass, std::uint64_t step, std::uint64_t queries) {
        switch (fate) {
        case Fate::Accept: accept += mass; break;
        case Fate::Reject: reject += mass; break;
        case Fate::Capped:
        case Fate::Dropped: nonhalt += mass; break;
        }
        weighted_steps += mass * static_cast<double>(step);
        if (mass > 0.0 || fate == Fate::Accept || fate == Fate::Reject) {
            steps_max = std::max(steps_max, step);
            queries_max = std::max(queries_max, queries);
        }
    }

    RunResult result(const MachineSpec& m) const {
        RunResult r;
        // Total mass is 1 up to rounding; dividing it out makes one-sided
        // outcomes come out as exactly 0 and 1.
        const double total = accept + reject + nonhalt;
        const double scale = total > 0.0 ? total : 1.0;
        r.accept_prob = std::clamp(accept / scale, 0.0, 1.0);
        r.reject_prob = std::clamp(reject / scale, 0.0, 1.0);
        r.nonhalt_prob = std::clamp(nonhalt / scale, 0.0, 1.0);
        r.steps_max = steps_max;
        r.steps_expected = total > 0.0 ? weighted_steps / total : 0.0;
        r.steps_expected = std::min(r.steps_expected, static_cast<double>(steps_max));
        r.space_bits = space_bits(m);
        if (m.is_query_start) r.queries_used = queries_max;
        return r;
    }
};

inline Fate fate_of(StateFlag flag) {
    return flag == StateFlag::Accepting ? Fate::Accept : Fate::Reject;
}

// ------------------------------------------------------------ deterministic

template <class Tracker>
RunResult deterministic_walk(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap,
                             Tracker& tracker) {
    validate_tape(tape);
    StateId state = m.initial_classical;
    std::size_t head = 0;
    std::uint64_t queries = 0;
    auto tag = tracker.initial();
    Totals totals;
    std::uint64_t step = 0;
    while (true) {
        const StateFlag flag = m.flags(state);
        if (flag != StateFlag::Neither) {
            tracker.finish(tag, 1.0, fate_of(flag), step);
            totals.record(fate_of(flag), 1.0, step, queries);
            break;
        }
        if (step == step_cap) {
            tracker.finish(tag, 1.0, Fate::Capped, step);
            totals.record(Fate::Capped, 1.0, step, queries);
            break;
        }
        const Action action = m.transition(state, tape[head]);
        const auto* mv = std::get_if<ClassicalMove>(&action);
        if (mv == nullptr) throw std::invalid_argument("deterministic machine returned a non-deterministic action");
        const std::size_t next_head = move_head(tape, head, mv->move);
        queries += query_increment(m, state, mv->next);
        ++step;
        tracker.step(tag, step, head, next_head, mv->next);
        state = mv->next;
        head = next_head;
    }
    return totals.result(m);
}

// ------------------------------------------------------------ probabilistic

inline Distribution as_distribution(const Action& action, const TolerancePolicy& tol) {
    if (const auto* mv = std::get_if<ClassicalMove>(&action)) return Distribution{{1.0, *mv}};
    const auto* dist = std::get_if<Distribution>(&action);
    if (dist == nullptr) throw std::invalid_argument("probabilistic machine returned a quantum action");
    double total = 0.0;
    for (const WeightedMove& w : *dist) {
        if (!(w.weight >= 0.0) || !std::isfinite(w.weight)) {
            throw MalformedDistribution("negative or non-finite transition weight");
        }
        total += w.weight;
    }
    if (dist->empty() || std::abs(total - 1.0) > tol.tol_prob) {
        throw MalformedDistribution("transition weights do not sum to 1");
    }
    return *dist;
}

template <class Tracker>
RunResult probabilistic_exact(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap,
                              Tracker& tracker, const MassObserver& observer) {
    validate_tape(tape);
    using Tag = typename Tracker::Tag;
    struct Cfg {
        double mass;
        Tag tag;
        std::uint64_t queries;
    };
    using Key = std::pair<StateId, std::size_t>;
    const TolerancePolicy& tol = default_tolerance();

    Totals totals;
    double halted = 0.0;
    std::map<Key, Cfg> live;
    {
        const StateFlag flag = m.flags(m.initial_classical);
        if (flag != StateFlag::Neither) {
            tracker.finish(tracker.initial(), 1.0, fate_of(flag), 0);
            totals.record(fate_of(flag), 1.0, 0, 0);
            return totals.result(m);
        }
        live.emplace(Key{m.initial_classical, 0}, Cfg{1.0, tracker.initial(), 0});
    }
    for (std::uint64_t step = 0; !live.empty(); ++step) {
        if (observer) {
            double mass = 0.0;
            for (const auto& [key, cfg] : live) mass += cfg.mass;
            observer(step, mass, halted, totals.nonhalt);
        }
        if (step == step_cap) {
            for (const auto& [key, cfg] : live) {
                tracker.finish(cfg.tag, cfg.mass, Fate::Capped, step);
                totals.record(Fate::Capped, cfg.mass, step, cfg.queries);
            }
            live.clear();
            break;
        }
        std::map<Key, Cfg> next;
        for (const auto& [key, cfg] : live) {
            const auto [state, head] = key;
            const Distribution dist = as_distribution(m.transition(state, tape[head]), tol);
            for (const WeightedMove& choice : dist) {
                if (choice.weight == 0.0) continue;
                const double mass = cfg.mass * choice.weight;
                const std::size_t next_head = move_head(tape, head, choice.to.move);
                const std::uint64_t queries = cfg.queries + query_increment(m, state, choice.to.next);
                Tag tag = cfg.tag;
                tracker.step(tag, step + 1, head, next_head, choice.to.next);
                const StateFlag flag = m.flags(choice.to.next);
                if (flag != StateFlag::Neither) {
                    tracker.finish(tag, mass, fate_of(flag), step + 1);
                    totals.record(fate_of(flag), mass, step + 1, queries);
                    halted += mass;
                    continue;
                }
                const Key child{choice.to.next, next_head};
                auto it = next.find(child);
                if (it == next.end()) {
                    next.emplace(child, Cfg{mass, std::move(tag), queries});
                } else {
                    tracker.merge(it->second.tag, it->second.mass, tag, mass);
                    it->second.mass += mass;
                    it->second.queries = std::max(it->second.queries, queries);
                }
            }
        }
        live = std::move(next);
    }
    if (observer) observer(totals.steps_max, 0.0, halted, totals.nonhalt);
    return totals.result(m);
}

// -------------------------------------------------------- quantum-classical

// Hash of the rounded |amplitude|^2 pattern, invariant under global phase.
// Equal rays get equal signatures except across a rounding edge, which only
// costs a missed merge.
inline std::uint64_t magnitude_signature(const StateVector& v) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Complex& a : v.amplitudes()) {
        h ^= static_cast<std::uint64_t>(std::llround(std::norm(a) * 1e6));
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <class Tracker>
RunResult qcfa_exact(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap,
                     double prune_eps, Tracker& tracker, const MassObserver& observer) {
    validate_tape(tape);
    if (m.kind != MachineKind::QuantumClassical || !m.initial_quantum) {
        throw std::invalid_argument("run_qcfa_exact needs a quantum-classical machine");
    }
    using Tag = typename Tracker::Tag;
    struct Cfg {
        StateVector q;
        double mass;
        Tag tag;
        std::uint64_t queries;
        std::uint64_t sig;
    };
    using Key = std::pair<StateId, std::size_t>;
    const TolerancePolicy& tol = default_tolerance();

    Totals totals;
    double halted = 0.0;
    std::map<Key, std::vector<Cfg>> live;
    {
        const StateFlag flag = m.flags(m.initial_classical);
        if (flag != StateFlag::Neither) {
            tracker.finish(tracker.initial(), 1.0, fate_of(flag), 0);
            totals.record(fate_of(flag), 1.0, 0, 0);
            return totals.result(m);
        }
        live[Key{m.initial_classical, 0}].push_back(
            Cfg{*m.initial_quantum, 1.0, tracker.initial(), 0, 0});
    }

    for (std::uint64_t step = 0; !live.empty(); ++step) {
        if (observer) {
            double mass = 0.0;
            for (const auto& [key, bucket] : live) {
                for (const Cfg& c : bucket) mass += c.mass;
            }
            observer(step, mass, halted, totals.nonhalt);
        }
        if (step == step_cap) {
            for (const auto& [key, bucket] : live) {
                for (const Cfg& c : bucket) {
                    tracker.finish(c.tag, c.mass, Fate::Capped, step);
                    totals.record(Fate::Capped, c.mass, step, c.queries);
                }
            }
            live.clear();
            break;
        }
        std::map<Key, std::vector<Cfg>> next;
        auto emit = [&](const Cfg& parent, StateId from_state, std::size_t head, const ClassicalMove& mv,
                        StateVector q, double mass) {
            const std::size_t next_head = move_head(tape, head, mv.move);
            const std::uint64_t queries = parent.queries + query_increment(m, from_state, mv.next);
            Tag tag = parent.tag;
            tracker.step(tag, step + 1, head, next_head, mv.next);
            const StateFlag flag = m.flags(mv.next);
            if (flag != StateFlag::Neither) {
                tracker.finish(tag, mass, fate_of(flag), step + 1);
                totals.record(fate_of(flag), mass, step + 1, queries);
                halted += mass;
                return;
            }
            std::vector<Cfg>& bucket = next[Key{mv.next, next_head}];
            const std::uint64_t sig = magnitude_signature(q);
            for (Cfg& existing : bucket) {
                if (existing.sig != sig) continue;
                if (existing.q.fidelity(q) >= kMergeFidelity) {
                    tracker.merge(existing.tag, existing.mass, tag, mass);
                    existing.mass += mass;
                    existing.queries = std::max(existing.queries, queries);
                    return;
                }
            }
            bucket.push_back(Cfg{std::move(q), mass, std::move(tag), queries, sig});
        };

        for (auto& [key, bucket] : live) {
            const auto [state, head] = key;
            const Action action = m.transition(state, tape[head]);
            for (Cfg& cfg : bucket) {
                if (const auto* u = std::get_if<UnitaryAction>(&action)) {
                    if (u->op && u->op->dim() != m.quantum_dim) {
                        throw DimensionError("unitary does not match the machine's quantum dimension");
                    }
                    StateVector q = u->op ? apply_unitary(*u->op, cfg.q) : std::move(cfg.q);
                    emit(cfg, state, head, u->then, std::move(q), cfg.mass);
                } else if (const auto* meas = std::get_if<MeasureAction>(&action)) {
                    if (!meas->measurement ||
                        meas->per_outcome.size() != meas->measurement->outcome_count()) {
                        throw InvalidMeasurementError("measurement outcomes and moves disagree");
                    }
                    auto outcomes = measure(*meas->measurement, cfg.q, tol, prune_eps);
                    for (std::size_t k = 0; k < outcomes.size(); ++k) {
                        const double mass = cfg.mass * outcomes[k].probability;
                        if (outcomes[k].probability < prune_eps || !outcomes[k].post_state) {
                            tracker.finish(cfg.tag, mass, Fate::Dropped, step + 1);
                            totals.record(Fate::Dropped, mass, step + 1, cfg.queries);
                            continue;
                        }
                        emit(cfg, state, head, meas->per_outcome[k], std::move(*outcomes[k].post_state),
                             mass);
                    }
                } else if (const auto* mv = std::get_if<ClassicalMove>(&action)) {
                    emit(cfg, state, head, *mv, std::move(cfg.q), cfg.mass);
                } else {
                    throw std::invalid_argument("2QCFA returned a probabilistic action");
                }
            }
        }
        live = std::move(next);
    }
    if (observer) observer(totals.steps_max, 0.0, halted, totals.nonhalt);
    return totals.result(m);
}

// --------------------------------------------------------------- sampling

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    // splitmix64 over (seed, trial)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct Trajectory {
    Fate fate = Fate::Capped;
    std::uint64_t steps = 0;
    std::uint64_t queries = 0;
};

template <class Tracker>
Trajectory sample_trajectory(const MachineSpec& m, const Tape& tape, std::uint64_t step_cap,
                             std::mt19937_64& rng, Tracker& tracker) {
    const TolerancePolicy& tol = default_tolerance();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StateId state = m.initial_classical;
    std::size_t head = 0;
    std::optional<StateVector> q = m.initial_quantum;
    auto tag = tracker.initial();
    Trajectory t;
    while (true) {
        const StateFlag flag = m.flags(state);
        if (flag != StateFlag::Neither) {
            t.fate = fate_of(flag);
            break;
        }
        if (t.steps == step_cap) {
            t.fate = Fate::Capped;
            break;
        }
        const Action action = m.transition(state, tape[head]);
        ClassicalMove mv;
        if (const auto* cm = std::get_if<ClassicalMove>(&action)) {
            mv = *cm;
        } else if (std::holds_alternative<Distribution>(action)) {
            const Distribution dist = as_distribution(action, tol);
            double u = unit(rng);
            mv = dist.back().to;
            for (const WeightedMove& w : dist) {
                if (u < w.weight) {
                    mv = w.to;
                    break;
                }
                u -= w.weight;
            }
        } else if (const auto* ua = std::get_if<UnitaryAction>(&action)) {
            if (ua->op) q = apply_unitary(*ua->op, *q);
            mv = ua->then;
        } else {
            const auto& meas = std::get<MeasureAction>(action);
            auto outcomes = measure(*meas.measurement, *q, tol);
            double u = unit(rng);
            std::size_t pick = outcomes.size();
            for (std::size_t k = 0; k < outcomes.size(); ++k) {
                if (!outcomes[k].post_state) continue;
                pick = k;
                if (u < outcomes[k].probability) break;
                u -= outcomes[k].probability;
            }
            if (pick == outcomes.size()) throw InvalidMeasurementError("no measurement outcome has support");
            q = std::move(outcomes[pick].post_state);
            mv = meas.per_outcome.at(pick);
        }
        const std::size_t next_head = move_head(tape, head, mv.move);
        t.queries += query_increment(m, state, mv.next);
        ++t.steps;
        tracker.step(tag, t.steps, head, next_head, mv.next);
        state = mv.next;
        head = next_head;
    }
    tracker.finish(tag, 1.0, t.fate, t.steps);
    return t;
}

}  // namespace twoway::detail
