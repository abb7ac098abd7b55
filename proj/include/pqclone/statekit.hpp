#pragma once

// Dense state-vector / density-matrix kernel for registers of a handful of
// qubits.
//
// Ordering convention used everywhere in this library: qubit 0 is the least
// significant bit of an amplitude index, and tensor(a, b) places the qubits of
// `a` above (more significant than) those of `b`. A k-qubit operator applied on
// targets {t0, t1, ...} reads t0 as the most significant bit of its local index,
// so a gate written on |ab> maps onto targets {qubit_of_a, qubit_of_b}.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pqclone {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

inline constexpr double kAlgebraicTol = 1e-10;
inline constexpr double kDecompositionTol = 1e-9;
inline constexpr double kNegligibleProbability = 1e-12;

class StateVector {
public:
    /// Throws std::invalid_argument unless the length is a power of two (>= 2)
    /// and the norm is 1 within kAlgebraicTol.
    explicit StateVector(Vector amplitudes);

    /// Rescales `amplitudes` to unit norm; throws on a zero vector.
    static StateVector normalized(Vector amplitudes);
    static StateVector basis(int qubit_count, std::size_t index);

    int qubit_count() const { return qubit_count_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

    /// <this|other>
    Complex inner(const StateVector& other) const;
    double norm() const { return amplitudes_.norm(); }

private:
    Vector amplitudes_;
    int qubit_count_ = 0;
};

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -1e-10).
    explicit DensityMatrix(Matrix entries);

    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(int qubit_count);

    int qubit_count() const { return qubit_count_; }
    std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    double purity() const;

private:
    Matrix entries_;
    int qubit_count_ = 0;
};

class UnitaryGate {
public:
    /// Throws std::invalid_argument unless square, power-of-two sized and
    /// U^dagger U = I within kAlgebraicTol.
    explicit UnitaryGate(Matrix matrix);

    int arity() const { return arity_; }
    const Matrix& matrix() const { return matrix_; }
    UnitaryGate adjoint() const;

    /// Matrix product; `(a * b)` applies b first.
    friend UnitaryGate operator*(const UnitaryGate& a, const UnitaryGate& b);

private:
    Matrix matrix_;
    int arity_ = 0;
};

/// Two-outcome Kraus pair on one qubit.
class GeneralizedMeasurement {
public:
    /// Throws std::invalid_argument unless m0^dagger m0 + m1^dagger m1 = I within 1e-10.
    GeneralizedMeasurement(Matrix m0, Matrix m1);

    const Matrix& m0() const { return m0_; }
    const Matrix& m1() const { return m1_; }
    const Matrix& kraus(int outcome) const { return outcome == 0 ? m0_ : m1_; }

private:
    Matrix m0_;
    Matrix m1_;
};

struct MeasurementOutcome {
    std::size_t index = 0;
    std::string label;
    double probability = 0.0;
    /// Collapsed state of the whole register, renormalized.
    StateVector post_state;
    /// State of the unmeasured qubits after a projective measurement on a
    /// strict subset (collapse onto a basis vector leaves them in a product
    /// with it). Empty for generalized measurements or full-register bases.
    std::optional<StateVector> residual;
};

/// One branch of a measurement, before sampling.
struct Branch {
    double probability = 0.0;
    /// Unnormalized post-measurement vector of the whole register.
    Vector collapsed;
};

// ---------------------------------------------------------------------------
// Register algebra

StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
UnitaryGate kron(const UnitaryGate& a, const UnitaryGate& b);

/// Lifts a 2^k x 2^k operator on `targets` to the full 2^n x 2^n register.
Matrix embed(const Matrix& op, std::span<const int> targets, int qubit_count);

/// Applies an arbitrary (not necessarily unitary) operator to a raw amplitude
/// vector; used for Kraus operators and projections.
Vector apply_operator(const Vector& amplitudes, const Matrix& op, std::span<const int> targets);

StateVector apply_gate(const StateVector& state, const UnitaryGate& gate, std::span<const int> targets);
DensityMatrix apply_gate(const DensityMatrix& rho, const UnitaryGate& gate, std::span<const int> targets);

// ---------------------------------------------------------------------------
// Measurement

/// Born-rule branches of a projective measurement of `qubits` in `basis`.
/// Throws std::invalid_argument if the basis is not orthonormal and complete
/// on the subset within 1e-9.
std::vector<Branch> basis_branches(const StateVector& state, std::span<const StateVector> basis,
                                   std::span<const int> qubits);

MeasurementOutcome measure_in_basis(const StateVector& state, std::span<const StateVector> basis,
                                    std::span<const int> qubits, Rng& rng,
                                    std::span<const std::string> labels = {});

/// Unnormalized conditional state of the remaining qubits given that `qubits`
/// were found in `outcome`: (<outcome| (x) I) |state>.
Vector project_out(const Vector& amplitudes, const StateVector& outcome, std::span<const int> qubits);

MeasurementOutcome apply_generalized_measurement(const StateVector& state, const GeneralizedMeasurement& pair,
                                                 int target, Rng& rng);

/// Draws an index from `probabilities`; entries below kNegligibleProbability
/// are never selected and the rest are renormalized.
std::size_t sample_index(std::span<const double> probabilities, Rng& rng);

// ---------------------------------------------------------------------------
// Reduced states and metrics

/// Traces out every qubit not in `keep`. Kept qubits retain their relative
/// order: the smallest kept index becomes qubit 0 of the result.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
Matrix partial_trace(const Matrix& op, int qubit_count, std::span<const int> keep);

/// Squared overlap |<psi|phi>|^2.
double fidelity(const StateVector& psi, const StateVector& phi);
/// <psi|rho|psi>
double fidelity(const StateVector& psi, const DensityMatrix& rho);

/// Tr|A| for a Hermitian operator; throws std::invalid_argument otherwise.
double trace_norm(const Matrix& hermitian);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Singular values of the amplitude matrix split as (subsystem, rest),
/// sorted descending. Throws on an empty or full subsystem.
std::vector<double> schmidt_coefficients(const StateVector& psi, std::span<const int> subsystem);
int schmidt_rank(std::span<const double> coefficients, double tol = 1e-9);

/// max_i |a_i - e^{i phi} b_i| for the phase phi maximizing |<a|b>|.
double phase_aligned_distance(const Vector& a, const Vector& b);
bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol);

/// Splits a two-party product state into its factors (global phase is put
/// on the first factor). Throws std::runtime_error when the state is
/// entangled beyond `tol` in 1 - (largest Schmidt coefficient)^2.
std::pair<StateVector, StateVector> split_product(const StateVector& psi, std::span<const int> first,
                                                  double tol = kDecompositionTol);

// ---------------------------------------------------------------------------
// Noise channels (trace preserving)

enum class NoiseKind { depolarizing, dephasing };

/// rho -> (1 - 3e/4) rho + (e/4)(X rho X + Y rho Y + Z rho Z) on one qubit;
/// e = 1 fully depolarizes the qubit.
Matrix depolarize(const Matrix& rho, int qubit_count, int qubit, double strength);
/// rho -> (1 - e/2) rho + (e/2) Z rho Z; e = 1 removes all coherence.
Matrix dephase(const Matrix& rho, int qubit_count, int qubit, double strength);
DensityMatrix apply_noise(const DensityMatrix& rho, NoiseKind kind, double strength);

// ---------------------------------------------------------------------------
// Random sampling helpers

StateVector random_state(int qubit_count, Rng& rng);
/// Ginibre-distributed mixed state of full rank (almost surely).
DensityMatrix random_density(int qubit_count, Rng& rng);

}  // namespace pqclone
