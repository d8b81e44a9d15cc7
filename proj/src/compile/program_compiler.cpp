#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "form_check_core.hpp"
#include "twoway/compile.hpp"
#include "twoway/serialize.hpp"

namespace twoway {

namespace {

using OpPtr = std::shared_ptr<const UnitaryOp>;
using MeasPtr = std::shared_ptr<const ProjectiveMeasurement>;

enum class BlockKind { Oracle, Unitary, Reset, Measure, FinalMeasure, RejectEnd };

struct Block {
    BlockKind kind = BlockKind::RejectEnd;
    OpPtr op;                      // Oracle: applied at the end of the pass; Unitary: the unitary
    std::vector<OpPtr> reset_ops;  // Reset: per basis outcome
    MeasPtr measurement;
    std::vector<Continuation> per_outcome;
    bool has_verify = false;
};

enum class Fam : std::uint8_t {
    Form, Rewind, Accept, Reject,
    Pass, Back,                          // ¢x$ oracle pass
    Hash, YPass, BackY, BackH, UnX,      // AND gadget
    Step, ResetMeasure, ResetApply,
    SeekX, SeekY, Fail,
};

struct Range {
    StateId begin;
    Fam fam;
    std::uint32_t block;
};

// Dense state numbering: consecutive ranges, decoded by binary search.
class StateSpace {
public:
    StateId add(Fam fam, std::uint32_t block, std::uint64_t size) {
        const StateId begin = total_;
        if (size == 0) return begin;
        ranges_.push_back({begin, fam, block});
        total_ += size;
        return begin;
    }
    std::uint64_t total() const { return total_; }

    struct Decoded {
        Fam fam;
        std::uint32_t block;
        std::uint64_t local;
    };
    Decoded decode(StateId s) const {
        auto it = std::upper_bound(ranges_.begin(), ranges_.end(), s,
                                   [](StateId v, const Range& r) { return v < r.begin; });
        --it;
        return {it->fam, it->block, s - it->begin};
    }

private:
    std::vector<Range> ranges_;
    std::uint64_t total_ = 0;
};

// A ⊕ [1] on the extra basis state, then ⊗ I_2 when the auxiliary qubit is present.
UnitaryOp lift(const UnitaryOp& a, bool aux) {
    const std::size_t d = a.dim() + 1;
    const std::size_t f = aux ? 2 : 1;
    switch (a.form()) {
    case UnitaryOp::Form::Diagonal: {
        std::vector<Complex> ph(d * f);
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t b = 0; b < f; ++b) ph[c * f + b] = c + 1 < d ? a.phases()[c] : Complex(1.0);
        }
        return UnitaryOp::diagonal(std::move(ph));
    }
    case UnitaryOp::Form::Monomial: {
        std::vector<std::size_t> perm(d * f);
        std::vector<Complex> ph(d * f);
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t b = 0; b < f; ++b) {
                perm[c * f + b] = (c + 1 < d ? a.permutation()[c] : c) * f + b;
                ph[c * f + b] = c + 1 < d ? a.phases()[c] : Complex(1.0);
            }
        }
        return UnitaryOp::monomial(std::move(perm), std::move(ph));
    }
    case UnitaryOp::Form::Dense: break;
    }
    Matrix g(d * f);
    const Matrix& src = a.dense_grid();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const Complex v = (r + 1 < d && c + 1 < d) ? src(r, c) : Complex(r == c ? 1.0 : 0.0);
            for (std::size_t b = 0; b < f; ++b) g(r * f + b, c * f + b) = v;
        }
    }
    return UnitaryOp::dense(std::move(g));
}

StateVector lift(const StateVector& v, bool aux) {
    const std::size_t f = aux ? 2 : 1;
    std::vector<Complex> a((v.dim() + 1) * f);
    for (std::size_t i = 0; i < v.dim(); ++i) a[i * f] = v[i];
    return StateVector(std::move(a));
}

// The extra basis state joins outcome 0.
ProjectiveMeasurement lift(const ProjectiveMeasurement& m, bool aux) {
    const std::size_t d = m.dim() + 1;
    const std::size_t f = aux ? 2 : 1;
    if (m.is_basis_partition()) {
        std::vector<std::size_t> part(d * f);
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t b = 0; b < f; ++b) part[c * f + b] = c + 1 < d ? m.partition()[c] : 0;
        }
        return ProjectiveMeasurement::basis_partition(std::move(part), m.labels());
    }
    std::vector<Matrix> projectors;
    for (std::size_t k = 0; k < m.outcome_count(); ++k) {
        const Matrix& src = m.dense_projectors()[k];
        Matrix g(d * f);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                Complex v = 0.0;
                if (r + 1 < d && c + 1 < d) v = src(r, c);
                else if (r == c && k == 0) v = 1.0;
                for (std::size_t b = 0; b < f; ++b) g(r * f + b, c * f + b) = v;
            }
        }
        projectors.push_back(std::move(g));
    }
    return ProjectiveMeasurement::from_projectors(std::move(projectors), m.labels());
}

// Reflection taking basis state e to v (v[e] must be 0).
UnitaryOp householder_to(std::size_t e, const StateVector& v) {
    if (std::abs(v[e]) > 1e-12) throw std::logic_error("target overlaps the reserved basis state");
    const std::size_t d = v.dim();
    std::vector<Complex> w(d);
    for (std::size_t i = 0; i < d; ++i) w[i] = (i == e ? 1.0 : 0.0) - v[i];
    Matrix g = Matrix::identity(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) g(r, c) -= w[r] * std::conj(w[c]);
    }
    return UnitaryOp::dense(std::move(g));
}

UnitaryOp swap_basis(std::size_t d, std::size_t a, std::size_t b) {
    std::vector<std::size_t> perm(d);
    for (std::size_t i = 0; i < d; ++i) perm[i] = i;
    std::swap(perm[a], perm[b]);
    return UnitaryOp::monomial(std::move(perm), std::vector<Complex>(d, 1.0));
}

class Layout {
public:
    Layout(const QueryProgram& p, bool and_mode) : n_(p.n), m_(p.m), and_(and_mode) {
        p.validate();
        reg_dim_ = p.dim();
        dim_ = (reg_dim_ + 1) * (and_ ? 2 : 1);
        extra_ = and_ ? aux_index(reg_dim_, 0) : reg_dim_;
        build_cell_ops();
        build_blocks(p);
        allocate();
    }

    std::size_t n() const { return n_; }
    std::size_t dim() const { return dim_; }
    std::size_t extra() const { return extra_; }
    std::uint64_t total() const { return space_.total(); }
    const std::vector<StateId>& block_starts() const { return starts_; }
    std::uint64_t oracle_blocks() const {
        return std::count_if(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.kind == BlockKind::Oracle; });
    }

    StateFlag flag(StateId s) const {
        if (s == accept_) return StateFlag::Accepting;
        if (s == reject_) return StateFlag::Rejecting;
        return StateFlag::Neither;
    }

    bool is_query_start(StateId s) const {
        const auto d = space_.decode(s);
        return d.fam == Fam::Pass && d.local == 0;
    }

    std::uint64_t step_bound() const {
        const std::uint64_t L = and_ ? 3 * n_ : n_;
        std::uint64_t total = 2 * L + 3;
        for (const Block& b : blocks_) total += block_cost(b);
        return total;
    }

    Action step(StateId s, Symbol sym) const;

private:
    std::uint64_t block_cost(const Block& b) const {
        switch (b.kind) {
        case BlockKind::Oracle: return and_ ? 6 * n_ + 2 : 2 * n_ + 2;
        case BlockKind::Unitary: return 1;
        case BlockKind::Reset: return 2;
        case BlockKind::Measure: return b.has_verify ? (and_ ? 6 * n_ + 1 : 2 * n_ + 1) : 1;
        case BlockKind::FinalMeasure:
        case BlockKind::RejectEnd: return 1;
        }
        return 0;
    }

    void build_cell_ops() {
        // index 0 unused so that cell i uses ops[i]
        x_phase_.resize(n_ + 1);
        u_flip_.resize(n_ + 1);
        v_phase_.resize(n_ + 1);
        for (std::size_t i = 1; i <= n_; ++i) {
            if (!and_) {
                std::vector<Complex> ph(dim_, 1.0);
                for (std::size_t j = 0; j < m_; ++j) ph[register_index(i, j, m_)] = -1.0;
                x_phase_[i] = std::make_shared<const UnitaryOp>(UnitaryOp::diagonal(std::move(ph)));
                continue;
            }
            std::vector<std::size_t> perm(dim_);
            for (std::size_t c = 0; c < dim_; ++c) perm[c] = c;
            std::vector<Complex> ph(dim_, 1.0);
            for (std::size_t j = 0; j < m_; ++j) {
                const std::size_t b = register_index(i, j, m_);
                std::swap(perm[aux_index(b, 0)], perm[aux_index(b, 1)]);
                ph[aux_index(b, 1)] = -1.0;
            }
            u_flip_[i] = std::make_shared<const UnitaryOp>(
                UnitaryOp::monomial(std::move(perm), std::vector<Complex>(dim_, 1.0)));
            v_phase_[i] = std::make_shared<const UnitaryOp>(UnitaryOp::diagonal(std::move(ph)));
        }
    }

    OpPtr lifted(const UnitaryOp& u) const {
        if (u.is_identity()) return nullptr;
        return std::make_shared<const UnitaryOp>(lift(u, and_));
    }

    void build_blocks(const QueryProgram& p) {
        const auto& ins = p.instructions;
        std::size_t pc = 0;
        StateVector prep = p.start;
        for (; pc < ins.size(); ++pc) {
            if (const auto* u = std::get_if<ApplyUnitary>(&ins[pc])) {
                prep = apply_unitary(*u->op, prep);
            } else if (const auto* r = std::get_if<ResetStep>(&ins[pc])) {
                prep = r->state;
            } else {
                break;
            }
        }
        initial_op_ = std::make_shared<const UnitaryOp>(householder_to(extra_, lift(prep, and_)));

        auto fold_unitaries = [&](std::size_t& at) {
            UnitaryOp acc = UnitaryOp::identity(reg_dim_);
            while (at < ins.size()) {
                const auto* u = std::get_if<ApplyUnitary>(&ins[at]);
                if (!u) break;
                acc = acc.then(*u->op);
                ++at;
            }
            return acc;
        };

        while (pc < ins.size()) {
            Block b;
            if (std::holds_alternative<OracleCall>(ins[pc])) {
                ++pc;
                b.kind = BlockKind::Oracle;
                b.op = lifted(fold_unitaries(pc));
            } else if (std::holds_alternative<ApplyUnitary>(ins[pc])) {
                b.kind = BlockKind::Unitary;
                b.op = lifted(fold_unitaries(pc));
                if (!b.op) continue;
            } else if (const auto* r = std::get_if<ResetStep>(&ins[pc])) {
                ++pc;
                StateVector target = r->state;
                target = apply_unitary(fold_unitaries(pc), target);
                b.kind = BlockKind::Reset;
                const UnitaryOp w = householder_to(extra_, lift(target, and_));
                for (std::size_t k = 0; k < dim_; ++k) {
                    b.reset_ops.push_back(std::make_shared<const UnitaryOp>(swap_basis(dim_, k, extra_).then(w)));
                }
                std::vector<std::size_t> part(dim_);
                std::vector<int> labels(dim_);
                for (std::size_t k = 0; k < dim_; ++k) {
                    part[k] = k;
                    labels[k] = static_cast<int>(k);
                }
                b.measurement = std::make_shared<const ProjectiveMeasurement>(
                    ProjectiveMeasurement::basis_partition(std::move(part), std::move(labels)));
            } else {
                const auto& ms = std::get<MeasureStep>(ins[pc]);
                ++pc;
                b.kind = BlockKind::Measure;
                b.measurement = std::make_shared<const ProjectiveMeasurement>(lift(*ms.measurement, and_));
                b.per_outcome = ms.per_outcome;
                b.has_verify = std::any_of(b.per_outcome.begin(), b.per_outcome.end(), [](const Continuation& c) {
                    return c.kind == Continuation::Kind::Verify && c.index >= 1;
                });
            }
            blocks_.push_back(std::move(b));
        }
        Block last;
        if (p.final_measurement) {
            last.kind = BlockKind::FinalMeasure;
            last.measurement = std::make_shared<const ProjectiveMeasurement>(lift(*p.final_measurement, and_));
        } else {
            last.kind = BlockKind::RejectEnd;
        }
        blocks_.push_back(std::move(last));
    }

    void allocate() {
        const TapeShape shape = and_ ? TapeShape::Pair : TapeShape::Plain;
        space_.add(Fam::Form, 0, detail::form_check_states(n_, shape));
        rewind_ = space_.add(Fam::Rewind, 0, 1);
        accept_ = space_.add(Fam::Accept, 0, 1);
        reject_ = space_.add(Fam::Reject, 0, 1);
        for (std::uint32_t b = 0; b < blocks_.size(); ++b) {
            const Block& blk = blocks_[b];
            switch (blk.kind) {
            case BlockKind::Oracle:
                if (!and_) {
                    starts_.push_back(space_.add(Fam::Pass, b, n_ + 1));
                    space_.add(Fam::Back, b, 1);
                } else {
                    starts_.push_back(space_.add(Fam::Pass, b, n_));
                    space_.add(Fam::Hash, b, 1);
                    space_.add(Fam::YPass, b, n_);
                    space_.add(Fam::BackY, b, 1);
                    space_.add(Fam::BackH, b, 1);
                    space_.add(Fam::UnX, b, n_);
                }
                break;
            case BlockKind::Reset:
                starts_.push_back(space_.add(Fam::ResetMeasure, b, 1));
                space_.add(Fam::ResetApply, b, dim_);
                break;
            case BlockKind::Measure:
                starts_.push_back(space_.add(Fam::Step, b, 1));
                if (blk.has_verify) {
                    space_.add(Fam::SeekX, b, n_);
                    if (and_) space_.add(Fam::SeekY, b, 2 * n_);
                    space_.add(Fam::Fail, b, 1);
                }
                break;
            default:
                starts_.push_back(space_.add(Fam::Step, b, 1));
                break;
            }
        }
    }

    StateId seek_x(std::uint32_t b, std::uint64_t r) const { return starts_[b] + 1 + r; }
    StateId seek_y(std::uint32_t b, std::uint64_t r) const { return starts_[b] + 1 + n_ + r; }
    StateId fail(std::uint32_t b) const { return starts_[b] + 1 + n_ + (and_ ? 2 * n_ : 0); }

    // and-mode oracle block offsets from the block start
    StateId hash(std::uint32_t b) const { return starts_[b] + n_; }
    StateId ypass(std::uint32_t b, std::uint64_t l) const { return starts_[b] + n_ + 1 + l; }
    StateId back_y(std::uint32_t b) const { return starts_[b] + 2 * n_ + 1; }
    StateId back_h(std::uint32_t b) const { return starts_[b] + 2 * n_ + 2; }
    StateId unx(std::uint32_t b, std::uint64_t i) const { return starts_[b] + 2 * n_ + 3 + i; }

    std::size_t n_, m_;
    bool and_;
    std::size_t reg_dim_ = 0, dim_ = 0, extra_ = 0;
    std::vector<OpPtr> x_phase_, u_flip_, v_phase_;
    OpPtr initial_op_;
    std::vector<Block> blocks_;
    StateSpace space_;
    StateId rewind_ = 0, accept_ = 0, reject_ = 0;
    std::vector<StateId> starts_;
};

bool is_bit(Symbol s) { return s == Symbol::Zero || s == Symbol::One; }

Action Layout::step(StateId s, Symbol sym) const {
    auto go = [](OpPtr op, StateId next, Move mv) -> Action { return UnitaryAction{std::move(op), {next, mv}}; };
    auto undefined = [&]() {
        return UndefinedTransition("no transition for state " + std::to_string(s) + " on '" +
                                   std::string(symbol_text(sym)) + "'");
    };
    const auto d = space_.decode(s);
    const std::uint32_t b = d.block;
    const StateId next_block = b + 1 < starts_.size() ? starts_[b + 1] : reject_;
    const bool one = sym == Symbol::One;

    switch (d.fam) {
    case Fam::Form: {
        const auto st = detail::form_check_step(n_, and_ ? TapeShape::Pair : TapeShape::Plain, d.local, sym);
        switch (st.kind) {
        case detail::FormStep::Kind::Continue: return go(nullptr, st.next, Move::Right);
        case detail::FormStep::Kind::Done: return go(nullptr, rewind_, Move::Left);
        case detail::FormStep::Kind::Fail: return go(nullptr, reject_, Move::Stay);
        }
        break;
    }
    case Fam::Rewind:
        if (sym == Symbol::LeftEnd) return go(initial_op_, starts_.front(), Move::Right);
        return go(nullptr, rewind_, Move::Left);
    case Fam::Accept:
    case Fam::Reject: break;

    case Fam::Pass:
        if (!and_) {
            if (d.local < n_ && is_bit(sym)) {
                return go(one ? x_phase_[d.local + 1] : nullptr, s + 1, Move::Right);
            }
            if (d.local == n_ && sym == Symbol::RightEnd) return go(blocks_[b].op, s + 1, Move::Left);
            break;
        }
        if (!is_bit(sym)) break;
        return go(one ? u_flip_[d.local + 1] : nullptr, d.local + 1 < n_ ? s + 1 : hash(b), Move::Right);
    case Fam::Back:
        if (is_bit(sym)) return go(nullptr, s, Move::Left);
        if (sym == Symbol::LeftEnd) return go(nullptr, next_block, Move::Right);
        break;
    case Fam::Hash:
        if (sym == Symbol::Hash) return go(nullptr, s, Move::Right);
        if (is_bit(sym)) return go(one ? v_phase_[1] : nullptr, ypass(b, 0), Move::Right);
        break;
    case Fam::YPass:
        if (d.local + 2 <= n_ && is_bit(sym)) {
            return go(one ? v_phase_[d.local + 2] : nullptr, s + 1, Move::Right);
        }
        if (d.local + 1 == n_ && sym == Symbol::RightEnd) return go(nullptr, back_y(b), Move::Left);
        break;
    case Fam::BackY:
        if (is_bit(sym)) return go(nullptr, s, Move::Left);
        if (sym == Symbol::Hash) return go(nullptr, back_h(b), Move::Left);
        break;
    case Fam::BackH:
        if (sym == Symbol::Hash) return go(nullptr, s, Move::Left);
        if (is_bit(sym)) return go(one ? u_flip_[n_] : nullptr, unx(b, n_ - 1), Move::Left);
        break;
    case Fam::UnX:
        if (d.local > 0 && is_bit(sym)) return go(one ? u_flip_[d.local] : nullptr, s - 1, Move::Left);
        if (d.local == 0 && sym == Symbol::LeftEnd) return go(blocks_[b].op, next_block, Move::Right);
        break;

    case Fam::Step: {
        const Block& blk = blocks_[b];
        switch (blk.kind) {
        case BlockKind::Unitary: return go(blk.op, next_block, Move::Stay);
        case BlockKind::RejectEnd: return go(nullptr, reject_, Move::Stay);
        case BlockKind::FinalMeasure: {
            MeasureAction a{blk.measurement, {}};
            for (int label : blk.measurement->labels()) {
                a.per_outcome.push_back({label == 1 ? accept_ : reject_, Move::Stay});
            }
            return a;
        }
        case BlockKind::Measure: {
            MeasureAction a{blk.measurement, {}};
            for (const Continuation& c : blk.per_outcome) {
                switch (c.kind) {
                case Continuation::Kind::Accept: a.per_outcome.push_back({accept_, Move::Stay}); break;
                case Continuation::Kind::Reject: a.per_outcome.push_back({reject_, Move::Stay}); break;
                case Continuation::Kind::Next: a.per_outcome.push_back({next_block, Move::Stay}); break;
                case Continuation::Kind::Verify:
                    if (c.index == 0) a.per_outcome.push_back({next_block, Move::Stay});
                    else a.per_outcome.push_back({seek_x(b, c.index - 1), Move::Stay});
                    break;
                }
            }
            return a;
        }
        default: break;
        }
        break;
    }
    case Fam::ResetMeasure: {
        MeasureAction a{blocks_[b].measurement, {}};
        for (std::size_t k = 0; k < dim_; ++k) a.per_outcome.push_back({s + 1 + k, Move::Stay});
        return a;
    }
    case Fam::ResetApply: return go(blocks_[b].reset_ops[d.local], next_block, Move::Stay);

    case Fam::SeekX:
        if (!is_bit(sym)) break;
        if (d.local > 0) return go(nullptr, s - 1, Move::Right);
        if (!one) return go(nullptr, fail(b), Move::Left);
        if (!and_) return go(nullptr, accept_, Move::Stay);
        return go(nullptr, seek_y(b, 2 * n_ - 1), Move::Right);
    case Fam::SeekY:
        if (d.local > 0 && (is_bit(sym) || sym == Symbol::Hash)) return go(nullptr, s - 1, Move::Right);
        if (d.local == 0 && is_bit(sym)) {
            return one ? go(nullptr, accept_, Move::Stay) : go(nullptr, fail(b), Move::Left);
        }
        break;
    case Fam::Fail:
        if (sym == Symbol::LeftEnd) return go(nullptr, next_block, Move::Right);
        if (sym != Symbol::RightEnd) return go(nullptr, s, Move::Left);
        break;
    }
    throw undefined();
}

CompiledMachine finish(std::shared_ptr<const Layout> layout, const QueryProgram& p, bool and_mode) {
    CompiledMachine c;
    MachineSpec& m = c.machine;
    m.kind = MachineKind::QuantumClassical;
    m.classical_state_count = layout->total();
    m.quantum_dim = layout->dim();
    m.initial_classical = 0;
    m.initial_quantum = StateVector::basis(layout->dim(), layout->extra());
    m.flags = [layout](StateId s) { return layout->flag(s); };
    m.transition = [layout](StateId s, Symbol sym) { return layout->step(s, sym); };
    m.is_query_start = [layout](StateId s) { return layout->is_query_start(s); };
    c.builder = and_mode ? "compile_and_oracle" : "compile_query";
    c.params = {{"program", program_to_json(p)}};
    m.builder = BuilderRef{c.builder, c.params};
    m.validate();

    c.n = p.n;
    c.shape = and_mode ? TapeShape::Pair : TapeShape::Plain;
    c.declared_classical_states = layout->total();
    c.declared_quantum_dim = layout->dim();
    c.query_count = p.query_count();
    c.well_formed_step_bound = layout->step_bound();
    c.block_starts = layout->block_starts();
    return c;
}

}  // namespace

CompiledMachine compile_query_program(const QueryProgram& p) {
    return finish(std::make_shared<const Layout>(p, false), p, false);
}

CompiledMachine compile_and_oracle_program(const QueryProgram& p) {
    return finish(std::make_shared<const Layout>(p, true), p, true);
}

std::uint64_t predicted_step_bound(const CompiledMachine& c, std::size_t tape_len) {
    if (c.builder != "compile_query" && c.builder != "compile_and_oracle" && c.builder != "eq_fingerprint") {
        throw std::invalid_argument("no step bound for builder '" + c.builder + "'");
    }
    // A malformed tape is rejected during the first left-to-right scan.
    if (tape_len != well_formed_length(c.n, c.shape)) return tape_len;
    return c.well_formed_step_bound;
}

std::uint64_t default_step_cap(const CompiledMachine& c, std::size_t tape_len) {
    return 50 * (static_cast<std::uint64_t>(tape_len) + 1) * (1 + c.query_count);
}

SegmentTrace trace_unitary_segment(const MachineSpec& m, const Tape& tape, StateId state, std::size_t head,
                                  StateVector q, StateId stop, std::uint64_t max_steps) {
    for (std::uint64_t step = 0; step < max_steps; ++step) {
        if (m.flags(state) != StateFlag::Neither) throw std::runtime_error("segment reached a halting state");
        const Action a = m.transition(state, tape.at(head));
        const auto* u = std::get_if<UnitaryAction>(&a);
        if (!u) throw std::runtime_error("segment reached a non-unitary step");
        if (u->op) q = apply_unitary(*u->op, q);
        const long long next = static_cast<long long>(head) + static_cast<int>(u->then.move);
        if (next < 0 || next >= static_cast<long long>(tape.size())) throw HeadOutOfRange("head left the tape");
        head = static_cast<std::size_t>(next);
        state = u->then.next;
        if (state == stop) return {std::move(q), step + 1};
    }
    throw std::runtime_error("segment did not reach the stop state");
}

StateVector embed_with_aux(const StateVector& v) {
    std::vector<Complex> a(2 * (v.dim() + 1));
    for (std::size_t i = 0; i < v.dim(); ++i) a[aux_index(i, 0)] = v[i];
    return StateVector(std::move(a));
}

}  // namespace twoway
