// Complex-amplitude substrate: state vectors, unitary operators, projective
// measurements and the tolerance policy shared by every engine.
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoway {

using Complex = std::complex<double>;

struct TolerancePolicy {
    double tol_norm = 1e-9;
    double tol_unitary = 1e-9;
    double tol_prob = 1e-9;

    // Throws std::invalid_argument unless every tolerance is in (0, 1e-6].
    void validate() const;
};

const TolerancePolicy& default_tolerance();

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonUnitaryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidMeasurementError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class StateVector {
public:
    explicit StateVector(std::vector<Complex> amps);

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const;
    bool is_normalized(const TolerancePolicy& tol = default_tolerance()) const;
    StateVector normalized() const;

    // max_i |a_i - b_i|
    double max_deviation(const StateVector& other) const;
    // |<this|other>|^2; equals 1 for states that agree up to a global phase.
    double fidelity(const StateVector& other) const;

    bool operator==(const StateVector&) const = default;

private:
    std::vector<Complex> amps_;
};

// Dense square grid, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim);
    Matrix(std::size_t dim, std::vector<Complex> row_major);

    static Matrix identity(std::size_t dim);
    static Matrix from_rows(const std::vector<std::vector<Complex>>& rows);

    std::size_t dim() const { return dim_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    Complex operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    std::span<const Complex> data() const { return data_; }

    Matrix adjoint() const;
    double max_abs_diff(const Matrix& other) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    bool operator==(const Matrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

// True iff max_{r,c} |(U U^dagger)_{rc} - delta_{rc}| <= tol_unitary.
bool check_unitary(const Matrix& grid, const TolerancePolicy& tol = default_tolerance());

// A validated unitary. Oracles and the per-cell automaton operators are
// diagonal or monomial (permutation times phases) and are stored that way.
class UnitaryOp {
public:
    enum class Form { Dense, Diagonal, Monomial };

    // Each factory throws NonUnitaryError if the operator fails the check.
    static UnitaryOp dense(Matrix grid, const TolerancePolicy& tol = default_tolerance());
    static UnitaryOp diagonal(std::vector<Complex> phases,
                              const TolerancePolicy& tol = default_tolerance());
    // U|c> = phases[c] |perm[c]>
    static UnitaryOp monomial(std::vector<std::size_t> perm, std::vector<Complex> phases,
                              const TolerancePolicy& tol = default_tolerance());
    static UnitaryOp identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    Form form() const { return form_; }
    bool is_identity() const;

    Matrix to_matrix() const;
    UnitaryOp adjoint() const;
    // Returns next * (*this).
    UnitaryOp then(const UnitaryOp& next) const;

    const Matrix& dense_grid() const { return grid_; }
    const std::vector<Complex>& phases() const { return phases_; }
    // Empty for diagonal operators.
    const std::vector<std::size_t>& permutation() const { return perm_; }

    void apply(std::span<const Complex> in, std::span<Complex> out) const;

private:
    UnitaryOp() = default;

    Form form_ = Form::Diagonal;
    std::size_t dim_ = 0;
    Matrix grid_;
    std::vector<Complex> phases_;
    std::vector<std::size_t> perm_;
};

StateVector apply_unitary(const UnitaryOp& u, const StateVector& v);

class ProjectiveMeasurement {
public:
    static ProjectiveMeasurement from_projectors(std::vector<Matrix> projectors,
                                                 std::vector<int> labels,
                                                 const TolerancePolicy& tol = default_tolerance());
    // Computational-basis partition: basis state b belongs to outcome outcome_of_basis[b].
    static ProjectiveMeasurement basis_partition(std::vector<std::size_t> outcome_of_basis,
                                                 std::vector<int> labels);

    std::size_t dim() const { return dim_; }
    std::size_t outcome_count() const { return labels_.size(); }
    const std::vector<int>& labels() const { return labels_; }
    bool is_basis_partition() const { return projectors_.empty(); }
    const std::vector<std::size_t>& partition() const { return partition_; }
    const std::vector<Matrix>& dense_projectors() const { return projectors_; }

    Matrix projector(std::size_t k) const;
    // Unnormalized P_k v.
    std::vector<Complex> project(std::size_t k, std::span<const Complex> v) const;

private:
    ProjectiveMeasurement() = default;

    std::size_t dim_ = 0;
    std::vector<int> labels_;
    std::vector<Matrix> projectors_;
    std::vector<std::size_t> partition_;
};

struct MeasurementOutcome {
    int label;
    double probability;
    // Absent when the outcome probability is below the post-state threshold.
    std::optional<StateVector> post_state;
};

std::vector<MeasurementOutcome> measure(const ProjectiveMeasurement& m, const StateVector& v,
                                        const TolerancePolicy& tol = default_tolerance());
// Same, with an explicit probability threshold for computing post-states.
std::vector<MeasurementOutcome> measure(const ProjectiveMeasurement& m, const StateVector& v,
                                        const TolerancePolicy& tol, double post_state_threshold);

}  // namespace twoway
