#include <algorithm>
#include <memory>
#include <stdexcept>

#include "twoway/compile.hpp"

namespace twoway {

namespace {

// Per prime p: x-region states (s, c) c = 0..n, #-region (s, c) c = 1..n,
// y-region (s, t, c) c = 1..n.
struct FingerprintLayout {
    std::size_t n = 0;
    std::vector<std::uint64_t> primes;
    std::vector<StateId> x_base, h_base, y_base;
    std::uint64_t total = 0;

    static constexpr StateId kStart = 0, kAccept = 1, kReject = 2;

    FingerprintLayout(std::size_t n_, std::vector<std::uint64_t> ps) : n(n_), primes(std::move(ps)) {
        StateId next = 3;
        for (std::uint64_t p : primes) {
            x_base.push_back(next);
            next += p * (n + 1);
            h_base.push_back(next);
            next += p * n;
            y_base.push_back(next);
            next += p * p * n;
        }
        total = next;
    }

    StateId x_state(std::size_t k, std::uint64_t s, std::uint64_t c) const { return x_base[k] + s * (n + 1) + c; }
    StateId h_state(std::size_t k, std::uint64_t s, std::uint64_t c) const { return h_base[k] + s * n + (c - 1); }
    StateId y_state(std::size_t k, std::uint64_t s, std::uint64_t t, std::uint64_t c) const {
        return y_base[k] + (s * primes[k] + t) * n + (c - 1);
    }

    Action step(StateId id, Symbol sym) const {
        const ClassicalMove reject{kReject, Move::Stay};
        const bool bit = sym == Symbol::Zero || sym == Symbol::One;
        const std::uint64_t b = sym == Symbol::One ? 1 : 0;
        if (id == kStart) {
            if (sym != Symbol::LeftEnd) return reject;
            Distribution branch;
            const double w = 1.0 / static_cast<double>(primes.size());
            for (std::size_t k = 0; k < primes.size(); ++k) branch.push_back({w, {x_state(k, 0, 0), Move::Right}});
            return branch;
        }
        // prime index owning this id: last block base <= id
        const auto it = std::upper_bound(x_base.begin(), x_base.end(), id);
        if (id < 3 || it == x_base.begin()) throw UndefinedTransition("halting state has no transition");
        const std::size_t k = static_cast<std::size_t>(it - x_base.begin()) - 1;
        const std::uint64_t p = primes[k];
        if (id < h_base[k]) {
            const std::uint64_t off = id - x_base[k];
            const std::uint64_t s = off / (n + 1), c = off % (n + 1);
            if (c < n) return bit ? Action{ClassicalMove{x_state(k, (2 * s + b) % p, c + 1), Move::Right}} : reject;
            return sym == Symbol::Hash ? Action{ClassicalMove{h_state(k, s, 1), Move::Right}} : reject;
        }
        if (id < y_base[k]) {
            const std::uint64_t off = id - h_base[k];
            const std::uint64_t s = off / n, c = off % n + 1;
            if (c < n) return sym == Symbol::Hash ? Action{ClassicalMove{h_state(k, s, c + 1), Move::Right}} : reject;
            return bit ? Action{ClassicalMove{y_state(k, s, b % p, 1), Move::Right}} : reject;
        }
        const std::uint64_t off = id - y_base[k];
        const std::uint64_t c = off % n + 1, st = off / n;
        const std::uint64_t s = st / p, t = st % p;
        if (c < n) return bit ? Action{ClassicalMove{y_state(k, s, (2 * t + b) % p, c + 1), Move::Right}} : reject;
        if (sym != Symbol::RightEnd) return reject;
        return ClassicalMove{s == t ? kAccept : kReject, Move::Stay};
    }
};

}  // namespace

CompiledMachine build_eq_fingerprint_2pfa(std::size_t n, PrimeRange range) {
    if (n < 2) throw std::invalid_argument("fingerprint machine needs n >= 2");
    auto layout = std::make_shared<const FingerprintLayout>(n, fingerprint_primes(n, range));

    CompiledMachine c;
    MachineSpec& m = c.machine;
    m.kind = MachineKind::Probabilistic;
    m.classical_state_count = layout->total;
    m.initial_classical = FingerprintLayout::kStart;
    m.flags = [](StateId s) {
        if (s == FingerprintLayout::kAccept) return StateFlag::Accepting;
        if (s == FingerprintLayout::kReject) return StateFlag::Rejecting;
        return StateFlag::Neither;
    };
    m.transition = [layout](StateId s, Symbol sym) { return layout->step(s, sym); };
    c.builder = "eq_fingerprint";
    c.params = {{"n", n}, {"prime_range", prime_range_name(range)}};
    m.builder = BuilderRef{c.builder, c.params};
    m.validate();

    c.n = n;
    c.shape = TapeShape::Pair;
    c.declared_classical_states = layout->total;
    c.declared_quantum_dim = 0;
    const double side = static_cast<double>(n) * static_cast<double>(n) + 1.0;
    c.nominal_classical_states = side * side * side;
    c.query_count = 0;
    c.well_formed_step_bound = well_formed_length(n, TapeShape::Pair);
    return c;
}

}  // namespace twoway
