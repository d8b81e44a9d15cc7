#include "twoway/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twoway/kernels.hpp"

namespace twoway {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void TolerancePolicy::validate() const {
    for (double t : {tol_norm, tol_unitary, tol_prob}) {
        if (!(t > 0.0 && t <= 1e-6)) {
            throw std::invalid_argument("tolerances must lie in (0, 1e-6]");
        }
    }
}

const TolerancePolicy& default_tolerance() {
    static const TolerancePolicy policy{};
    return policy;
}

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) throw DimensionError("state vector must have dim >= 1");
    for (Complex a : amps_) {
        if (!finite(a)) throw std::invalid_argument("state vector amplitude is not finite");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DimensionError("basis index out of range");
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (Complex a : amps_) s += std::norm(a);
    return s;
}

bool StateVector::is_normalized(const TolerancePolicy& tol) const {
    return std::abs(norm_squared() - 1.0) <= tol.tol_norm;
}

StateVector StateVector::normalized() const {
    const double norm = std::sqrt(norm_squared());
    if (norm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    std::vector<Complex> out(amps_);
    for (Complex& a : out) a /= norm;
    return StateVector(std::move(out));
}

double StateVector::max_deviation(const StateVector& other) const {
    if (other.dim() != dim()) throw DimensionError("state dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        worst = std::max(worst, std::abs(amps_[i] - other.amps_[i]));
    }
    return worst;
}

double StateVector::fidelity(const StateVector& other) const {
    if (other.dim() != dim()) throw DimensionError("state dimension mismatch");
    Complex overlap{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) overlap += std::conj(amps_[i]) * other.amps_[i];
    return std::norm(overlap);
}

// --------------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

Matrix::Matrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
    if (data_.size() != dim * dim) throw DimensionError("matrix data is not dim x dim");
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
    const std::size_t dim = rows.size();
    Matrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        if (rows[r].size() != dim) throw DimensionError("grid is not square");
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    }
    return out;
}

double Matrix::max_abs_diff(const Matrix& other) const {
    if (other.dim_ != dim_) throw DimensionError("matrix dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    }
    return worst;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw DimensionError("matrix dimension mismatch");
    const std::size_t d = a.dim_;
    Matrix out(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) continue;
            for (std::size_t c = 0; c < d; ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw DimensionError("matrix dimension mismatch");
    Matrix out(a);
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
}

bool check_unitary(const Matrix& grid, const TolerancePolicy& tol) {
    if (grid.dim() == 0) return false;
    for (Complex z : grid.data()) {
        if (!finite(z)) return false;
    }
    return kernels::unitarity_deviation(grid.data(), grid.dim()) <= tol.tol_unitary;
}

// ------------------------------------------------------------------ UnitaryOp

namespace {

void check_phases(const std::vector<Complex>& phases, const TolerancePolicy& tol) {
    for (Complex p : phases) {
        if (!finite(p) || std::abs(std::norm(p) - 1.0) > tol.tol_unitary) {
            throw NonUnitaryError("operator phase does not have unit modulus");
        }
    }
}

}  // namespace

UnitaryOp UnitaryOp::dense(Matrix grid, const TolerancePolicy& tol) {
    if (grid.dim() == 0) throw DimensionError("operator must have dim >= 1");
    if (!check_unitary(grid, tol)) throw NonUnitaryError("operator fails U U^dagger = I");
    UnitaryOp op;
    op.form_ = Form::Dense;
    op.dim_ = grid.dim();
    op.grid_ = std::move(grid);
    return op;
}

UnitaryOp UnitaryOp::diagonal(std::vector<Complex> phases, const TolerancePolicy& tol) {
    if (phases.empty()) throw DimensionError("operator must have dim >= 1");
    check_phases(phases, tol);
    UnitaryOp op;
    op.form_ = Form::Diagonal;
    op.dim_ = phases.size();
    op.phases_ = std::move(phases);
    return op;
}

UnitaryOp UnitaryOp::monomial(std::vector<std::size_t> perm, std::vector<Complex> phases,
                              const TolerancePolicy& tol) {
    if (phases.empty()) throw DimensionError("operator must have dim >= 1");
    if (perm.size() != phases.size()) throw DimensionError("permutation/phase length mismatch");
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t p : perm) {
        if (p >= perm.size() || seen[p]) throw NonUnitaryError("monomial map is not a permutation");
        seen[p] = true;
    }
    check_phases(phases, tol);
    UnitaryOp op;
    op.form_ = Form::Monomial;
    op.dim_ = phases.size();
    op.phases_ = std::move(phases);
    op.perm_ = std::move(perm);
    return op;
}

UnitaryOp UnitaryOp::identity(std::size_t dim) {
    return diagonal(std::vector<Complex>(dim, Complex{1.0, 0.0}));
}

bool UnitaryOp::is_identity() const {
    switch (form_) {
    case Form::Diagonal:
        return std::all_of(phases_.begin(), phases_.end(),
                           [](Complex p) { return p == Complex{1.0, 0.0}; });
    case Form::Monomial:
        for (std::size_t c = 0; c < dim_; ++c) {
            if (perm_[c] != c || phases_[c] != Complex{1.0, 0.0}) return false;
        }
        return true;
    case Form::Dense:
        return grid_ == Matrix::identity(dim_);
    }
    return false;
}

Matrix UnitaryOp::to_matrix() const {
    if (form_ == Form::Dense) return grid_;
    Matrix m(dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
        const std::size_t r = form_ == Form::Diagonal ? c : perm_[c];
        m(r, c) = phases_[c];
    }
    return m;
}

UnitaryOp UnitaryOp::adjoint() const {
    UnitaryOp op;
    op.form_ = form_;
    op.dim_ = dim_;
    switch (form_) {
    case Form::Dense:
        op.grid_ = grid_.adjoint();
        break;
    case Form::Diagonal:
        op.phases_.resize(dim_);
        for (std::size_t i = 0; i < dim_; ++i) op.phases_[i] = std::conj(phases_[i]);
        break;
    case Form::Monomial:
        // U|c> = p_c |perm c>  =>  U^dagger |perm c> = conj(p_c) |c>
        op.phases_.resize(dim_);
        op.perm_.resize(dim_);
        for (std::size_t c = 0; c < dim_; ++c) {
            op.perm_[perm_[c]] = c;
            op.phases_[perm_[c]] = std::conj(phases_[c]);
        }
        break;
    }
    return op;
}

UnitaryOp UnitaryOp::then(const UnitaryOp& next) const {
    if (next.dim_ != dim_) throw DimensionError("operator dimension mismatch");
    UnitaryOp op;
    op.dim_ = dim_;
    if (form_ != Form::Dense && next.form_ != Form::Dense) {
        const bool diag = form_ == Form::Diagonal && next.form_ == Form::Diagonal;
        op.form_ = diag ? Form::Diagonal : Form::Monomial;
        op.phases_.resize(dim_);
        if (!diag) op.perm_.resize(dim_);
        for (std::size_t c = 0; c < dim_; ++c) {
            const std::size_t mid = form_ == Form::Diagonal ? c : perm_[c];
            const std::size_t out = next.form_ == Form::Diagonal ? mid : next.perm_[mid];
            op.phases_[c] = next.phases_[mid] * phases_[c];
            if (!diag) op.perm_[c] = out;
        }
        return op;
    }
    op.form_ = Form::Dense;
    op.grid_ = next.to_matrix() * to_matrix();
    return op;
}

void UnitaryOp::apply(std::span<const Complex> in, std::span<Complex> out) const {
    switch (form_) {
    case Form::Dense:
        kernels::matvec(grid_.data(), in, out);
        break;
    case Form::Diagonal:
        for (std::size_t i = 0; i < dim_; ++i) out[i] = phases_[i] * in[i];
        break;
    case Form::Monomial:
        for (std::size_t c = 0; c < dim_; ++c) out[perm_[c]] = phases_[c] * in[c];
        break;
    }
}

StateVector apply_unitary(const UnitaryOp& u, const StateVector& v) {
    if (u.dim() != v.dim()) throw DimensionError("operator and state dimensions differ");
    std::vector<Complex> out(v.dim());
    u.apply(v.amplitudes(), out);
    return StateVector(std::move(out));
}

// ------------------------------------------------------ ProjectiveMeasurement

ProjectiveMeasurement ProjectiveMeasurement::from_projectors(std::vector<Matrix> projectors,
                                                             std::vector<int> labels,
                                                             const TolerancePolicy& tol) {
    if (projectors.empty()) throw InvalidMeasurementError("measurement has no outcomes");
    if (projectors.size() != labels.size()) {
        throw InvalidMeasurementError("projector and label counts differ");
    }
    const std::size_t dim = projectors.front().dim();
    if (dim == 0) throw DimensionError("measurement must have dim >= 1");
    Matrix total(dim);
    for (const Matrix& p : projectors) {
        if (p.dim() != dim) throw DimensionError("projector dimensions differ");
        if ((p * p).max_abs_diff(p) > tol.tol_unitary) {
            throw InvalidMeasurementError("projector is not idempotent");
        }
        if (p.adjoint().max_abs_diff(p) > tol.tol_unitary) {
            throw InvalidMeasurementError("projector is not Hermitian");
        }
        total = total + p;
    }
    if (total.max_abs_diff(Matrix::identity(dim)) > tol.tol_unitary) {
        throw InvalidMeasurementError("projectors do not sum to the identity");
    }
    ProjectiveMeasurement m;
    m.dim_ = dim;
    m.labels_ = std::move(labels);
    m.projectors_ = std::move(projectors);
    return m;
}

ProjectiveMeasurement ProjectiveMeasurement::basis_partition(std::vector<std::size_t> outcome_of_basis,
                                                             std::vector<int> labels) {
    if (labels.empty()) throw InvalidMeasurementError("measurement has no outcomes");
    if (outcome_of_basis.empty()) throw DimensionError("measurement must have dim >= 1");
    for (std::size_t k : outcome_of_basis) {
        if (k >= labels.size()) throw InvalidMeasurementError("basis state assigned to unknown outcome");
    }
    ProjectiveMeasurement m;
    m.dim_ = outcome_of_basis.size();
    m.labels_ = std::move(labels);
    m.partition_ = std::move(outcome_of_basis);
    return m;
}

Matrix ProjectiveMeasurement::projector(std::size_t k) const {
    if (!is_basis_partition()) return projectors_.at(k);
    Matrix p(dim_);
    for (std::size_t b = 0; b < dim_; ++b) {
        if (partition_[b] == k) p(b, b) = 1.0;
    }
    return p;
}

std::vector<Complex> ProjectiveMeasurement::project(std::size_t k, std::span<const Complex> v) const {
    std::vector<Complex> out(dim_);
    if (is_basis_partition()) {
        for (std::size_t b = 0; b < dim_; ++b) {
            if (partition_[b] == k) out[b] = v[b];
        }
    } else {
        kernels::matvec(projectors_.at(k).data(), v, out);
    }
    return out;
}

std::vector<MeasurementOutcome> measure(const ProjectiveMeasurement& m, const StateVector& v,
                                        const TolerancePolicy& tol) {
    return measure(m, v, tol, tol.tol_prob);
}

std::vector<MeasurementOutcome> measure(const ProjectiveMeasurement& m, const StateVector& v,
                                        const TolerancePolicy& tol, double post_state_threshold) {
    if (m.dim() != v.dim()) throw DimensionError("measurement and state dimensions differ");
    if (!v.is_normalized(tol)) throw std::invalid_argument("measured state is not normalized");

    std::vector<MeasurementOutcome> outcomes;
    outcomes.reserve(m.outcome_count());
    double total = 0.0;
    for (std::size_t k = 0; k < m.outcome_count(); ++k) {
        std::vector<Complex> projected = m.project(k, v.amplitudes());
        double p = 0.0;
        for (Complex a : projected) p += std::norm(a);
        total += p;
        MeasurementOutcome out{m.labels()[k], std::clamp(p, 0.0, 1.0), std::nullopt};
        if (p >= post_state_threshold && p > 0.0) {
            const double scale = 1.0 / std::sqrt(p);
            for (Complex& a : projected) a *= scale;
            out.post_state = StateVector(std::move(projected));
        }
        outcomes.push_back(std::move(out));
    }
    if (std::abs(total - 1.0) > tol.tol_prob) {
        throw InvalidMeasurementError("outcome probabilities do not sum to 1");
    }
    return outcomes;
}

}  // namespace twoway
