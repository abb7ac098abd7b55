#include "pqclone/statekit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pqclone {

namespace {

int log2_exact(Eigen::Index dimension, const char* what)
{
    if (dimension < 2 || !std::has_single_bit(static_cast<std::size_t>(dimension))) {
        throw std::invalid_argument(std::string(what) + ": dimension must be a power of two >= 2");
    }
    return std::countr_zero(static_cast<std::size_t>(dimension));
}

void check_targets(std::span<const int> targets, int qubit_count)
{
    std::size_t seen = 0;
    for (int t : targets) {
        if (t < 0 || t >= qubit_count) {
            throw std::out_of_range("qubit index " + std::to_string(t) + " out of range for " +
                                    std::to_string(qubit_count) + " qubits");
        }
        if (seen & (std::size_t{1} << t)) {
            throw std::invalid_argument("duplicate target qubit " + std::to_string(t));
        }
        seen |= std::size_t{1} << t;
    }
}

// offsets[l] is the full-register index contribution of local index l.
std::vector<std::size_t> local_offsets(std::span<const int> targets)
{
    const std::size_t arity = targets.size();
    std::vector<std::size_t> offsets(std::size_t{1} << arity, 0);
    for (std::size_t l = 0; l < offsets.size(); ++l) {
        for (std::size_t k = 0; k < arity; ++k) {
            if ((l >> (arity - 1 - k)) & 1U) {
                offsets[l] |= std::size_t{1} << targets[k];
            }
        }
    }
    return offsets;
}

std::size_t target_mask(std::span<const int> targets)
{
    std::size_t mask = 0;
    for (int t : targets) {
        mask |= std::size_t{1} << t;
    }
    return mask;
}

std::vector<int> sorted_copy(std::span<const int> qubits)
{
    std::vector<int> out(qubits.begin(), qubits.end());
    std::sort(out.begin(), out.end());
    return out;
}

// Gathers the bits of `index` at `positions` (ascending) into a compact integer.
std::size_t gather_bits(std::size_t index, std::span<const int> positions)
{
    std::size_t out = 0;
    for (std::size_t r = 0; r < positions.size(); ++r) {
        out |= ((index >> positions[r]) & 1U) << r;
    }
    return out;
}

std::vector<int> complement(std::span<const int> qubits, int qubit_count)
{
    std::vector<int> rest;
    for (int q = 0; q < qubit_count; ++q) {
        if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) {
            rest.push_back(q);
        }
    }
    return rest;
}

Matrix pauli(char which)
{
    Matrix p = Matrix::Zero(2, 2);
    switch (which) {
    case 'x':
        p(0, 1) = 1.0;
        p(1, 0) = 1.0;
        break;
    case 'y':
        p(0, 1) = Complex(0, -1);
        p(1, 0) = Complex(0, 1);
        break;
    default:
        p(0, 0) = 1.0;
        p(1, 1) = -1.0;
        break;
    }
    return p;
}

Matrix conjugate_by(const Matrix& rho, const Matrix& single, int qubit_count, int qubit)
{
    const int target[] = {qubit};
    const Matrix full = embed(single, target, qubit_count);
    return full * rho * full.adjoint();
}

}  // namespace

// ---------------------------------------------------------------------------

StateVector::StateVector(Vector amplitudes)
    : amplitudes_(std::move(amplitudes))
    , qubit_count_(log2_exact(amplitudes_.size(), "StateVector"))
{
    const double n = amplitudes_.norm();
    if (std::abs(n * n - 1.0) > kAlgebraicTol) {
        throw std::invalid_argument("StateVector: amplitudes not normalized (norm^2 = " + std::to_string(n * n) + ")");
    }
}

StateVector StateVector::normalized(Vector amplitudes)
{
    const double n = amplitudes.norm();
    if (n == 0.0 || !std::isfinite(n)) {
        throw std::invalid_argument("StateVector::normalized: zero or non-finite vector");
    }
    return StateVector(amplitudes / n);
}

StateVector StateVector::basis(int qubit_count, std::size_t index)
{
    if (qubit_count < 1 || qubit_count > 20) {
        throw std::invalid_argument("StateVector::basis: bad qubit count");
    }
    const std::size_t dim = std::size_t{1} << qubit_count;
    if (index >= dim) {
        throw std::out_of_range("StateVector::basis: index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

Complex StateVector::inner(const StateVector& other) const
{
    if (other.dimension() != dimension()) {
        throw std::invalid_argument("inner product: dimension mismatch");
    }
    return amplitudes_.dot(other.amplitudes_);
}

DensityMatrix::DensityMatrix(Matrix entries)
    : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("DensityMatrix: not square");
    }
    qubit_count_ = log2_exact(entries_.rows(), "DensityMatrix");
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kAlgebraicTol) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(entries_.trace() - Complex(1.0)) > kAlgebraicTol) {
        throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kAlgebraicTol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi)
{
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int qubit_count)
{
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubit_count);
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const
{
    return (entries_ * entries_).trace().real();
}

UnitaryGate::UnitaryGate(Matrix matrix)
    : matrix_(std::move(matrix))
{
    if (matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("UnitaryGate: not square");
    }
    arity_ = log2_exact(matrix_.rows(), "UnitaryGate");
    const Matrix residual = matrix_.adjoint() * matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols());
    if (residual.cwiseAbs().maxCoeff() > kAlgebraicTol) {
        throw std::invalid_argument("UnitaryGate: matrix is not unitary");
    }
}

UnitaryGate UnitaryGate::adjoint() const
{
    return UnitaryGate(matrix_.adjoint());
}

UnitaryGate operator*(const UnitaryGate& a, const UnitaryGate& b)
{
    if (a.arity() != b.arity()) {
        throw std::invalid_argument("UnitaryGate product: arity mismatch");
    }
    return UnitaryGate(a.matrix() * b.matrix());
}

GeneralizedMeasurement::GeneralizedMeasurement(Matrix m0, Matrix m1)
    : m0_(std::move(m0))
    , m1_(std::move(m1))
{
    if (m0_.rows() != 2 || m0_.cols() != 2 || m1_.rows() != 2 || m1_.cols() != 2) {
        throw std::invalid_argument("GeneralizedMeasurement: Kraus operators must be 2x2");
    }
    const Matrix sum = m0_.adjoint() * m0_ + m1_.adjoint() * m1_;
    if ((sum - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > kAlgebraicTol) {
        throw std::invalid_argument("GeneralizedMeasurement: completeness relation violated");
    }
}

// ---------------------------------------------------------------------------

StateVector tensor(const StateVector& a, const StateVector& b)
{
    Vector out(static_cast<Eigen::Index>(a.dimension() * b.dimension()));
    const auto nb = static_cast<Eigen::Index>(b.dimension());
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dimension()); ++i) {
        out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
    }
    return StateVector::normalized(std::move(out));
}

namespace {
Matrix kron_matrix(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}
}  // namespace

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b)
{
    return DensityMatrix(kron_matrix(a.entries(), b.entries()));
}

UnitaryGate kron(const UnitaryGate& a, const UnitaryGate& b)
{
    return UnitaryGate(kron_matrix(a.matrix(), b.matrix()));
}

Matrix embed(const Matrix& op, std::span<const int> targets, int qubit_count)
{
    check_targets(targets, qubit_count);
    const auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (op.rows() != local_dim || op.cols() != local_dim) {
        throw std::invalid_argument("embed: operator size does not match target count");
    }
    const std::size_t dim = std::size_t{1} << qubit_count;
    const auto offsets = local_offsets(targets);
    const std::size_t mask = target_mask(targets);
    Matrix full = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t r = 0; r < offsets.size(); ++r) {
            for (std::size_t c = 0; c < offsets.size(); ++c) {
                full(static_cast<Eigen::Index>(base | offsets[r]), static_cast<Eigen::Index>(base | offsets[c])) =
                    op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return full;
}

Vector apply_operator(const Vector& amplitudes, const Matrix& op, std::span<const int> targets)
{
    const int n = log2_exact(amplitudes.size(), "apply_operator");
    check_targets(targets, n);
    const auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (op.rows() != local_dim || op.cols() != local_dim) {
        throw std::invalid_argument("apply_operator: operator arity does not match target count");
    }
    const auto offsets = local_offsets(targets);
    const std::size_t mask = target_mask(targets);
    Vector out(amplitudes.size());
    Vector local(local_dim);
    for (std::size_t base = 0; base < static_cast<std::size_t>(amplitudes.size()); ++base) {
        if (base & mask) {
            continue;
        }
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            local(l) = amplitudes(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(l)]));
        }
        const Vector mapped = op * local;
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            out(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(l)])) = mapped(l);
        }
    }
    return out;
}

StateVector apply_gate(const StateVector& state, const UnitaryGate& gate, std::span<const int> targets)
{
    if (static_cast<int>(targets.size()) != gate.arity()) {
        throw std::invalid_argument("apply_gate: target count does not match gate arity");
    }
    return StateVector(apply_operator(state.amplitudes(), gate.matrix(), targets));
}

DensityMatrix apply_gate(const DensityMatrix& rho, const UnitaryGate& gate, std::span<const int> targets)
{
    if (static_cast<int>(targets.size()) != gate.arity()) {
        throw std::invalid_argument("apply_gate: target count does not match gate arity");
    }
    const Matrix full = embed(gate.matrix(), targets, rho.qubit_count());
    return DensityMatrix(full * rho.entries() * full.adjoint());
}

// ---------------------------------------------------------------------------

Vector project_out(const Vector& amplitudes, const StateVector& outcome, std::span<const int> qubits)
{
    const int n = log2_exact(amplitudes.size(), "project_out");
    check_targets(qubits, n);
    if (outcome.qubit_count() != static_cast<int>(qubits.size())) {
        throw std::invalid_argument("project_out: outcome size does not match measured qubits");
    }
    const auto rest = complement(qubits, n);
    const auto offsets = local_offsets(qubits);
    const std::size_t mask = target_mask(qubits);
    Vector out = Vector::Zero(static_cast<Eigen::Index>(std::size_t{1} << rest.size()));
    for (std::size_t base = 0; base < static_cast<std::size_t>(amplitudes.size()); ++base) {
        if (base & mask) {
            continue;
        }
        Complex acc = 0.0;
        for (std::size_t l = 0; l < offsets.size(); ++l) {
            acc += std::conj(outcome[l]) * amplitudes(static_cast<Eigen::Index>(base | offsets[l]));
        }
        out(static_cast<Eigen::Index>(gather_bits(base, rest))) = acc;
    }
    return out;
}

std::vector<Branch> basis_branches(const StateVector& state, std::span<const StateVector> basis,
                                   std::span<const int> qubits)
{
    check_targets(qubits, state.qubit_count());
    const std::size_t local_dim = std::size_t{1} << qubits.size();
    if (basis.size() != local_dim) {
        throw std::invalid_argument("measure_in_basis: basis is incomplete");
    }
    for (std::size_t a = 0; a < basis.size(); ++a) {
        if (basis[a].dimension() != local_dim) {
            throw std::invalid_argument("measure_in_basis: basis vector has wrong dimension");
        }
        for (std::size_t b = a; b < basis.size(); ++b) {
            const Complex ip = basis[a].inner(basis[b]);
            const double expected = a == b ? 1.0 : 0.0;
            if (std::abs(ip - expected) > kDecompositionTol) {
                throw std::invalid_argument("measure_in_basis: basis is not orthonormal");
            }
        }
    }
    std::vector<Branch> branches;
    branches.reserve(basis.size());
    for (const auto& b : basis) {
        Matrix projector = b.amplitudes() * b.amplitudes().adjoint();
        Vector collapsed = apply_operator(state.amplitudes(), projector, qubits);
        const double p = collapsed.squaredNorm();
        branches.push_back({p, std::move(collapsed)});
    }
    return branches;
}

std::size_t sample_index(std::span<const double> probabilities, Rng& rng)
{
    double total = 0.0;
    for (double p : probabilities) {
        if (p >= kNegligibleProbability) {
            total += p;
        }
    }
    if (total <= 0.0) {
        throw std::runtime_error("sample_index: no outcome has non-negligible probability");
    }
    std::uniform_real_distribution<double> uniform(0.0, total);
    const double r = uniform(rng);
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] < kNegligibleProbability) {
            continue;
        }
        acc += probabilities[i];
        last = i;
        if (r < acc) {
            return i;
        }
    }
    return last;
}

MeasurementOutcome measure_in_basis(const StateVector& state, std::span<const StateVector> basis,
                                    std::span<const int> qubits, Rng& rng, std::span<const std::string> labels)
{
    auto branches = basis_branches(state, basis, qubits);
    if (!labels.empty() && labels.size() != branches.size()) {
        throw std::invalid_argument("measure_in_basis: label count does not match basis size");
    }
    std::vector<double> probs;
    probs.reserve(branches.size());
    for (const auto& b : branches) {
        probs.push_back(b.probability);
    }
    const std::size_t pick = sample_index(probs, rng);
    std::optional<StateVector> residual;
    if (static_cast<int>(qubits.size()) < state.qubit_count()) {
        residual = StateVector::normalized(project_out(state.amplitudes(), basis[pick], qubits));
    }
    return MeasurementOutcome{
        .index = pick,
        .label = labels.empty() ? std::to_string(pick) : labels[pick],
        .probability = probs[pick],
        .post_state = StateVector::normalized(std::move(branches[pick].collapsed)),
        .residual = std::move(residual),
    };
}

MeasurementOutcome apply_generalized_measurement(const StateVector& state, const GeneralizedMeasurement& pair,
                                                 int target, Rng& rng)
{
    const int targets[] = {target};
    Vector branch0 = apply_operator(state.amplitudes(), pair.m0(), targets);
    Vector branch1 = apply_operator(state.amplitudes(), pair.m1(), targets);
    const double probs[] = {branch0.squaredNorm(), branch1.squaredNorm()};
    const std::size_t pick = sample_index(probs, rng);
    return MeasurementOutcome{
        .index = pick,
        .label = pick == 0 ? "0" : "1",
        .probability = probs[pick],
        .post_state = StateVector::normalized(pick == 0 ? std::move(branch0) : std::move(branch1)),
        .residual = std::nullopt,
    };
}

// ---------------------------------------------------------------------------

Matrix partial_trace(const Matrix& op, int qubit_count, std::span<const int> keep)
{
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    check_targets(keep, qubit_count);
    const auto kept = sorted_copy(keep);
    const auto traced = complement(kept, qubit_count);
    const std::size_t traced_mask = target_mask(traced);
    const std::size_t dim = std::size_t{1} << qubit_count;
    const auto out_dim = static_cast<Eigen::Index>(std::size_t{1} << kept.size());
    Matrix out = Matrix::Zero(out_dim, out_dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto ki = static_cast<Eigen::Index>(gather_bits(i, kept));
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i & traced_mask) != (j & traced_mask)) {
                continue;
            }
            out(ki, static_cast<Eigen::Index>(gather_bits(j, kept))) +=
                op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep)
{
    return DensityMatrix(partial_trace(rho.entries(), rho.qubit_count(), keep));
}

double fidelity(const StateVector& psi, const StateVector& phi)
{
    if (psi.dimension() != phi.dimension()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    return std::norm(psi.inner(phi));
}

double fidelity(const StateVector& psi, const DensityMatrix& rho)
{
    if (psi.dimension() != rho.dimension()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    return psi.amplitudes().dot(rho.entries() * psi.amplitudes()).real();
}

double trace_norm(const Matrix& hermitian)
{
    if (hermitian.rows() != hermitian.cols()) {
        throw std::invalid_argument("trace_norm: not square");
    }
    if ((hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > kAlgebraicTol) {
        throw std::invalid_argument("trace_norm: operator is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b)
{
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    return trace_norm(a.entries() - b.entries());
}

namespace {
Matrix amplitude_matrix(const StateVector& psi, std::span<const int> subsystem)
{
    check_targets(subsystem, psi.qubit_count());
    if (subsystem.empty() || static_cast<int>(subsystem.size()) >= psi.qubit_count()) {
        throw std::invalid_argument("schmidt decomposition: bipartition is trivial");
    }
    const auto first = sorted_copy(subsystem);
    const auto rest = complement(first, psi.qubit_count());
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(std::size_t{1} << first.size()),
                            static_cast<Eigen::Index>(std::size_t{1} << rest.size()));
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
        m(static_cast<Eigen::Index>(gather_bits(i, first)), static_cast<Eigen::Index>(gather_bits(i, rest))) = psi[i];
    }
    return m;
}
}  // namespace

std::vector<double> schmidt_coefficients(const StateVector& psi, std::span<const int> subsystem)
{
    const Matrix m = amplitude_matrix(psi, subsystem);
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

int schmidt_rank(std::span<const double> coefficients, double tol)
{
    return static_cast<int>(std::count_if(coefficients.begin(), coefficients.end(), [tol](double c) { return c > tol; }));
}

double phase_aligned_distance(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("phase_aligned_distance: dimension mismatch");
    }
    const Complex overlap = b.dot(a);  // <b|a>
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol)
{
    return a.dimension() == b.dimension() && phase_aligned_distance(a.amplitudes(), b.amplitudes()) <= tol;
}

std::pair<StateVector, StateVector> split_product(const StateVector& psi, std::span<const int> first, double tol)
{
    const Matrix m = amplitude_matrix(psi, first);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double top = svd.singularValues()(0);
    if (1.0 - top * top > tol) {
        throw std::runtime_error("split_product: state is entangled across the cut");
    }
    Vector a = svd.matrixU().col(0);
    Vector b = svd.matrixV().col(0).conjugate();
    return {StateVector::normalized(std::move(a)), StateVector::normalized(std::move(b))};
}

// ---------------------------------------------------------------------------

Matrix depolarize(const Matrix& rho, int qubit_count, int qubit, double strength)
{
    if (strength < 0.0 || strength > 1.0) {
        throw std::invalid_argument("depolarize: strength must lie in [0, 1]");
    }
    return (1.0 - 0.75 * strength) * rho +
           0.25 * strength *
               (conjugate_by(rho, pauli('x'), qubit_count, qubit) + conjugate_by(rho, pauli('y'), qubit_count, qubit) +
                conjugate_by(rho, pauli('z'), qubit_count, qubit));
}

Matrix dephase(const Matrix& rho, int qubit_count, int qubit, double strength)
{
    if (strength < 0.0 || strength > 1.0) {
        throw std::invalid_argument("dephase: strength must lie in [0, 1]");
    }
    return (1.0 - 0.5 * strength) * rho + 0.5 * strength * conjugate_by(rho, pauli('z'), qubit_count, qubit);
}

DensityMatrix apply_noise(const DensityMatrix& rho, NoiseKind kind, double strength)
{
    Matrix out = rho.entries();
    for (int q = 0; q < rho.qubit_count(); ++q) {
        out = kind == NoiseKind::depolarizing ? depolarize(out, rho.qubit_count(), q, strength)
                                              : dephase(out, rho.qubit_count(), q, strength);
    }
    // Hermiticity can drift by an ulp per layer.
    return DensityMatrix(0.5 * (out + out.adjoint()));
}

StateVector random_state(int qubit_count, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(std::size_t{1} << qubit_count));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = Complex(re, im);
    }
    return StateVector::normalized(std::move(v));
}

DensityMatrix random_density(int qubit_count, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubit_count);
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace pqclone
