#include "twoway/querymodel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twoway {

std::size_t QueryProgram::query_count() const {
    std::size_t t = 0;
    for (const Instruction& ins : instructions) t += std::holds_alternative<OracleCall>(ins);
    return t;
}

bool QueryProgram::is_straight_line() const {
    for (const Instruction& ins : instructions) {
        if (std::holds_alternative<MeasureStep>(ins) || std::holds_alternative<ResetStep>(ins)) return false;
    }
    return final_measurement != nullptr;
}

void QueryProgram::validate() const {
    if (n == 0 || m == 0) throw std::invalid_argument("query program needs n, m >= 1");
    const std::size_t d = dim();
    if (start.dim() != d) throw DimensionError("start state has the wrong dimension");
    if (!start.is_normalized()) throw std::invalid_argument("start state is not normalized");
    for (const Instruction& ins : instructions) {
        if (const auto* u = std::get_if<ApplyUnitary>(&ins)) {
            if (!u->op || u->op->dim() != d) throw DimensionError("unitary has the wrong dimension");
        } else if (const auto* ms = std::get_if<MeasureStep>(&ins)) {
            if (!ms->measurement || ms->measurement->dim() != d) {
                throw DimensionError("measurement has the wrong dimension");
            }
            if (ms->per_outcome.size() != ms->measurement->outcome_count()) {
                throw std::invalid_argument("one continuation per outcome is required");
            }
            for (const Continuation& c : ms->per_outcome) {
                if (c.kind == Continuation::Kind::Verify && c.index > n) {
                    throw std::invalid_argument("verify index out of range");
                }
            }
        } else if (const auto* r = std::get_if<ResetStep>(&ins)) {
            if (r->state.dim() != d) throw DimensionError("reset state has the wrong dimension");
            if (!r->state.is_normalized()) throw std::invalid_argument("reset state is not normalized");
        }
    }
    if (final_measurement && final_measurement->dim() != d) {
        throw DimensionError("final measurement has the wrong dimension");
    }
}

UnitaryOp oracle_matrix(const Bits& x, std::size_t m) {
    if (x.empty() || m == 0) throw std::invalid_argument("oracle needs n, m >= 1");
    std::vector<Complex> phases((x.size() + 1) * m, 1.0);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        if (!x[i - 1]) continue;
        for (std::size_t j = 0; j < m; ++j) phases[register_index(i, j, m)] = -1.0;
    }
    return UnitaryOp::diagonal(std::move(phases));
}

QueryResult run_query_program(const QueryProgram& p, const Bits& x) {
    return run_query_program(p, x, [&x](std::size_t i) { return i >= 1 && i <= x.size() && x[i - 1] == 1; });
}

QueryResult run_query_program(const QueryProgram& p, const Bits& x, const Verifier& verify) {
    p.validate();
    if (x.size() != p.n) throw DimensionError("input length differs from the program's n");
    const TolerancePolicy& tol = default_tolerance();
    const UnitaryOp oracle = oracle_matrix(x, p.m);

    struct Branch {
        StateVector q;
        double mass;
        std::uint64_t queries;
    };
    QueryResult result;
    auto finish = [&](bool accepted, double mass, std::uint64_t queries) {
        (accepted ? result.accept_prob : result.reject_prob) += mass;
        if (mass > 0.0) result.queries = std::max(result.queries, queries);
    };

    std::vector<Branch> live{{p.start, 1.0, 0}};
    for (const Instruction& ins : p.instructions) {
        std::vector<Branch> next;
        auto keep = [&next](Branch b) {
            for (Branch& e : next) {
                if (e.q.fidelity(b.q) >= 1.0 - 1e-12) {
                    e.mass += b.mass;
                    e.queries = std::max(e.queries, b.queries);
                    return;
                }
            }
            next.push_back(std::move(b));
        };
        for (Branch& b : live) {
            if (const auto* u = std::get_if<ApplyUnitary>(&ins)) {
                keep({apply_unitary(*u->op, b.q), b.mass, b.queries});
            } else if (std::holds_alternative<OracleCall>(ins)) {
                keep({apply_unitary(oracle, b.q), b.mass, b.queries + 1});
            } else if (const auto* r = std::get_if<ResetStep>(&ins)) {
                keep({r->state, b.mass, b.queries});
            } else {
                const auto& ms = std::get<MeasureStep>(ins);
                auto outcomes = measure(*ms.measurement, b.q, tol, kQueryPruneEps);
                for (std::size_t k = 0; k < outcomes.size(); ++k) {
                    if (!outcomes[k].post_state) continue;
                    const double mass = b.mass * outcomes[k].probability;
                    const Continuation& c = ms.per_outcome[k];
                    switch (c.kind) {
                    case Continuation::Kind::Accept: finish(true, mass, b.queries); break;
                    case Continuation::Kind::Reject: finish(false, mass, b.queries); break;
                    case Continuation::Kind::Verify:
                        if (verify(c.index)) {
                            finish(true, mass, b.queries);
                            break;
                        }
                        [[fallthrough]];
                    case Continuation::Kind::Next:
                        keep({std::move(*outcomes[k].post_state), mass, b.queries});
                        break;
                    }
                }
            }
        }
        live = std::move(next);
    }
    for (const Branch& b : live) {
        if (!p.final_measurement) {
            finish(false, b.mass, b.queries);
            continue;
        }
        const auto outcomes = measure(*p.final_measurement, b.q, tol, kQueryPruneEps);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            const bool accepted = p.final_measurement->labels()[k] == 1;
            finish(accepted, b.mass * outcomes[k].probability, b.queries);
        }
    }
    result.accept_prob = std::clamp(result.accept_prob, 0.0, 1.0);
    result.reject_prob = std::clamp(result.reject_prob, 0.0, 1.0);
    return result;
}

std::vector<std::size_t> default_grover_schedule(std::size_t n) {
    if (n < 2) throw std::invalid_argument("Grover schedule needs n >= 2");
    const auto top = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
    std::vector<std::size_t> schedule;
    for (std::size_t j = 0; j <= top; ++j) {
        const double iters = std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(n) / std::ldexp(1.0, static_cast<int>(j)));
        schedule.push_back(static_cast<std::size_t>(std::ceil(iters - 1e-12)));
    }
    return schedule;
}

std::uint64_t grover_query_budget(const std::vector<std::size_t>& schedule, std::size_t repeats) {
    std::uint64_t total = 0;
    for (std::size_t mj : schedule) total += mj;
    return total * repeats;
}

ProjectiveMeasurement index_measurement(std::size_t n, std::size_t m) {
    std::vector<std::size_t> outcome((n + 1) * m);
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j < m; ++j) outcome[register_index(i, j, m)] = i;
    }
    std::vector<int> labels(n + 1);
    for (std::size_t i = 0; i <= n; ++i) labels[i] = static_cast<int>(i);
    return ProjectiveMeasurement::basis_partition(std::move(outcome), std::move(labels));
}

UnitaryOp grover_diffusion(std::size_t n) {
    Matrix d(n + 1);
    d(0, 0) = 1.0;
    const double u = 2.0 / static_cast<double>(n);
    for (std::size_t r = 1; r <= n; ++r) {
        for (std::size_t c = 1; c <= n; ++c) d(r, c) = u - (r == c ? 1.0 : 0.0);
    }
    return UnitaryOp::dense(std::move(d));
}

StateVector uniform_nonzero_index(std::size_t n) {
    std::vector<Complex> a(n + 1, 1.0 / std::sqrt(static_cast<double>(n)));
    a[0] = 0.0;
    return StateVector(std::move(a));
}

QueryProgram grover_program(std::size_t n, const std::vector<std::size_t>& schedule, std::size_t repeats) {
    if (n < 2) throw std::invalid_argument("grover_program needs n >= 2");
    QueryProgram p;
    p.n = n;
    p.m = 1;
    p.start = uniform_nonzero_index(n);
    auto diffusion = std::make_shared<const UnitaryOp>(grover_diffusion(n));
    auto index = std::make_shared<const ProjectiveMeasurement>(index_measurement(n, 1));
    std::vector<Continuation> verify{Continuation::next()};
    for (std::size_t i = 1; i <= n; ++i) verify.push_back(Continuation::verify(i));

    for (std::size_t r = 0; r < repeats; ++r) {
        for (std::size_t mj : schedule) {
            p.instructions.push_back(ResetStep{uniform_nonzero_index(n)});
            for (std::size_t k = 0; k < mj; ++k) {
                p.instructions.push_back(OracleCall{});
                p.instructions.push_back(ApplyUnitary{diffusion});
            }
            p.instructions.push_back(MeasureStep{index, verify});
        }
    }
    return p;
}

QueryProgram grover_program(std::size_t n) { return grover_program(n, default_grover_schedule(n), 3); }

QueryProgram parity2_program() {
    const double h = 1.0 / std::sqrt(2.0);
    // columns: |0> -> (|1>+|2>)/sqrt2, |1> -> (|1>-|2>)/sqrt2, |2> -> |0>
    Matrix u0 = Matrix::from_rows({{0.0, 0.0, 1.0}, {h, h, 0.0}, {h, -h, 0.0}});
    auto U0 = std::make_shared<const UnitaryOp>(UnitaryOp::dense(u0));
    auto U1 = std::make_shared<const UnitaryOp>(U0->adjoint());
    QueryProgram p;
    p.n = 2;
    p.m = 1;
    p.start = StateVector::basis(3, 0);
    p.instructions = {ApplyUnitary{U0}, OracleCall{}, ApplyUnitary{U1}};
    p.final_measurement = std::make_shared<const ProjectiveMeasurement>(
        ProjectiveMeasurement::basis_partition({0, 1, 0}, {0, 1}));
    return p;
}

UnitaryOp random_unitary(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<std::vector<Complex>> cols(dim, std::vector<Complex>(dim));
    for (auto& c : cols) {
        for (auto& z : c) z = Complex(g(rng), g(rng));
    }
    // modified Gram-Schmidt, twice for stability
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t j = 0; j < k; ++j) {
                Complex dot = 0.0;
                for (std::size_t r = 0; r < dim; ++r) dot += std::conj(cols[j][r]) * cols[k][r];
                for (std::size_t r = 0; r < dim; ++r) cols[k][r] -= dot * cols[j][r];
            }
            double norm = 0.0;
            for (const Complex& z : cols[k]) norm += std::norm(z);
            norm = std::sqrt(norm);
            for (Complex& z : cols[k]) z /= norm;
        }
    }
    Matrix u(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) u(r, c) = cols[c][r];
    }
    return UnitaryOp::dense(std::move(u));
}

StateVector random_state(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<Complex> a(dim);
    for (auto& z : a) z = Complex(g(rng), g(rng));
    return StateVector(std::move(a)).normalized();
}

QueryProgram random_straight_line_program(std::size_t n, std::size_t m, std::size_t t, std::mt19937_64& rng) {
    QueryProgram p;
    p.n = n;
    p.m = m;
    const std::size_t d = p.dim();
    p.start = random_state(d, rng);
    for (std::size_t k = 0; k <= t; ++k) {
        if (k > 0) p.instructions.push_back(OracleCall{});
        p.instructions.push_back(ApplyUnitary{std::make_shared<const UnitaryOp>(random_unitary(d, rng))});
    }
    std::vector<std::size_t> split(d);
    std::bernoulli_distribution coin(0.5);
    for (auto& s : split) s = coin(rng) ? 1 : 0;
    p.final_measurement =
        std::make_shared<const ProjectiveMeasurement>(ProjectiveMeasurement::basis_partition(split, {0, 1}));
    return p;
}

}  // namespace twoway
