#include "pqclone/gates.hpp"

#include "pqclone/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pqclone {

namespace {

constexpr double kAngleSlack = 1e-12;

void check_cloning_angle(double theta, const char* who)
{
    if (!(theta >= -kAngleSlack && theta <= std::numbers::pi / 4 + kAngleSlack)) {
        throw std::domain_error(std::string(who) + ": angle must lie in [0, pi/4]");
    }
}

Matrix projector(int bit)
{
    Matrix p = Matrix::Zero(2, 2);
    p(bit, bit) = 1.0;
    return p;
}

Matrix kron2(const Matrix& a, const Matrix& b)
{
    Matrix out(4, 4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
        }
    }
    return out;
}

Matrix block_diag(const Matrix& upper, const Matrix& lower)
{
    Matrix out = Matrix::Zero(4, 4);
    out.topLeftCorner(2, 2) = upper;
    out.bottomRightCorner(2, 2) = lower;
    return out;
}

}  // namespace

UnitaryGate identity_gate(int arity)
{
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << arity);
    return UnitaryGate(Matrix::Identity(dim, dim));
}

UnitaryGate sigma_x()
{
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return UnitaryGate(m);
}

UnitaryGate sigma_z()
{
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return UnitaryGate(m);
}

UnitaryGate ry(double angle)
{
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    Matrix m(2, 2);
    m << c, s, -s, c;
    return UnitaryGate(m);
}

StateVector phi_state(double theta, Sign sign)
{
    Vector v(2);
    v << sign_value(sign) * std::sin(theta), std::cos(theta);
    return StateVector(std::move(v));
}

double merged_angle(double theta1, double theta2)
{
    check_cloning_angle(theta1, "merged_angle");
    check_cloning_angle(theta2, "merged_angle");
    // sin^2 theta3 = (1 - cos 2t1 cos 2t2) / 2, expanded to avoid cancellation
    const double a = std::pow(std::sin(theta1), 2);
    const double b = std::pow(std::sin(theta2), 2);
    return std::asin(std::sqrt(std::clamp(a + b - 2 * a * b, 0.0, 0.5)));
}

StateVector d_gate_column(double theta1, double theta2, int i)
{
    const double theta3 = merged_angle(theta1, theta2);
    const double c1 = std::cos(theta1);
    const double s1 = std::sin(theta1);
    const double c2 = std::cos(theta2);
    const double s2 = std::sin(theta2);
    Vector v = Vector::Zero(4);
    if (i == 1) {
        v(3) = c1 * c2;
        v(0) = s1 * s2;
        v /= std::cos(theta3);
    } else {
        if (std::sin(theta3) == 0.0) {
            throw std::domain_error("d_gate: theta1 = theta2 = 0 leaves D|0>|1> undefined");
        }
        v(2) = c1 * s2;
        v(1) = s1 * c2;
        v /= std::sin(theta3);
    }
    return StateVector::normalized(std::move(v));
}

UnitaryGate d_gate(double theta1, double theta2, DGateCompletion completion)
{
    check_cloning_angle(theta1, "d_gate");
    check_cloning_angle(theta2, "d_gate");
    if (merged_angle(theta1, theta2) == 0.0) {
        throw std::domain_error("d_gate: theta1 = theta2 = 0 is degenerate");
    }
    Matrix d = Matrix::Zero(4, 4);
    d.col(3) = d_gate_column(theta1, theta2, 1).amplitudes();
    d.col(1) = d_gate_column(theta1, theta2, 0).amplitudes();

    std::vector<Vector> accepted{d.col(3), d.col(1)};
    std::vector<Vector> completed;
    for (int e = 0; e < 4 && completed.size() < 2; ++e) {
        Vector v = Vector::Zero(4);
        v(e) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : accepted) {
                v -= u.dot(v) * u;
            }
        }
        // Some candidate always keeps at least a quarter of its weight.
        if (v.squaredNorm() >= 0.25) {
            v.normalize();
            accepted.push_back(v);
            completed.push_back(v);
        }
    }
    if (completion == DGateCompletion::gram_schmidt) {
        d.col(0) = completed[0];
        d.col(2) = completed[1];
    } else {
        d.col(0) = -completed[1];
        d.col(2) = -completed[0];
    }
    return UnitaryGate(d);
}

UnitaryGate d_chain(int count, double theta, DGateCompletion completion)
{
    if (count < 2) {
        throw std::invalid_argument("d_chain: need at least two qubits");
    }
    if (!(theta > 0.0)) {
        throw std::domain_error("d_chain: theta must lie in (0, pi/4]");
    }
    check_cloning_angle(theta, "d_chain");
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << count);
    Matrix total = Matrix::Identity(dim, dim);
    const int first = count - 1;  // particle 1 is the most significant qubit
    for (int j = 1; j < count; ++j) {
        const UnitaryGate merge = d_gate(chain_angle(theta, j), theta, completion).adjoint();
        const int targets[] = {first, first - j};
        total = embed(merge.matrix(), targets, count) * total;
    }
    return UnitaryGate(total);
}

StateVector d_chain_residue(int count)
{
    if (count < 2) {
        throw std::invalid_argument("d_chain_residue: need at least two qubits");
    }
    return StateVector::basis(count - 1, (std::size_t{1} << (count - 1)) - 1);
}

double reduction_omega(int copies, int targets, double theta)
{
    if (copies < 1 || copies >= targets) {
        throw std::domain_error("reduction_u: need 1 <= M < N");
    }
    check_cloning_angle(theta, "reduction_u");
    const double t = std::max(std::sin(2.0 * (std::numbers::pi / 4 - theta)), 0.0);
    const double gamma = success_gamma(copies, targets, theta);
    const double arg = gamma * (1.0 + std::pow(t, targets)) / (1.0 + std::pow(t, copies));
    return std::acos(std::sqrt(std::clamp(arg, 0.0, 1.0)));
}

UnitaryGate controlled_probe_rotation(double omega)
{
    Matrix rot(2, 2);
    rot << std::cos(omega), -std::sin(omega), std::sin(omega), std::cos(omega);
    return UnitaryGate(block_diag(Matrix::Identity(2, 2), rot));
}

UnitaryGate reduction_u(int copies, int targets, double theta)
{
    return controlled_probe_rotation(reduction_omega(copies, targets, theta));
}

GeneralizedMeasurement povm_pair(double theta)
{
    if (!(theta >= -kAngleSlack && theta <= std::numbers::pi / 2 + kAngleSlack)) {
        throw std::domain_error("povm_pair: theta must lie in [0, pi/2]");
    }
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    Matrix m0 = Matrix::Zero(2, 2);
    Matrix m1 = Matrix::Zero(2, 2);
    m0(0, 0) = s;
    m0(1, 1) = c;
    m1(0, 0) = c;
    m1(1, 1) = s;
    return GeneralizedMeasurement(m0, m1);
}

DilatedMeasurement dilate(const GeneralizedMeasurement& povm, double theta)
{
    const GeneralizedMeasurement expected = povm_pair(theta);
    if ((povm.m0() - expected.m0()).cwiseAbs().maxCoeff() > kAlgebraicTol ||
        (povm.m1() - expected.m1()).cwiseAbs().maxCoeff() > kAlgebraicTol) {
        throw std::invalid_argument("dilate: measurement was not built from this angle");
    }
    return DilatedMeasurement{
        .unitary = UnitaryGate(block_diag(ry(-std::numbers::pi + 2 * theta).matrix(), ry(-2 * theta).matrix())),
        .probe_ready_state = StateVector::basis(1, 0),
        .theta = theta,
    };
}

MeasurementOutcome measure_dilated(const StateVector& state, const DilatedMeasurement& dilated, int target, Rng& rng)
{
    if (target < 0 || target >= state.qubit_count()) {
        throw std::out_of_range("measure_dilated: target out of range");
    }
    // The probe becomes qubit 0; every register qubit moves up by one.
    const StateVector joint = tensor(state, dilated.probe_ready_state);
    const int targets[] = {target + 1, 0};
    const StateVector evolved = apply_gate(joint, dilated.unitary, targets);
    const StateVector probe_basis[] = {StateVector::basis(1, 0), StateVector::basis(1, 1)};
    const int probe[] = {0};
    auto outcome = measure_in_basis(evolved, probe_basis, probe, rng);
    return MeasurementOutcome{
        .index = outcome.index,
        .label = outcome.label,
        .probability = outcome.probability,
        .post_state = *outcome.residual,
        .residual = std::nullopt,
    };
}

std::string_view to_string(BellOutcome outcome)
{
    switch (outcome) {
    case BellOutcome::psi_plus:
        return "psi+";
    case BellOutcome::psi_minus:
        return "psi-";
    case BellOutcome::phi_plus:
        return "phi+";
    case BellOutcome::phi_minus:
        return "phi-";
    }
    return "?";
}

const std::array<StateVector, 4>& bell_basis()
{
    static const std::array<StateVector, 4> basis = [] {
        const double h = std::numbers::sqrt2 / 2;
        auto make = [h](int a, int b, double sign) {
            Vector v = Vector::Zero(4);
            v(a) = h;
            v(b) = sign * h;
            return StateVector(v);
        };
        return std::array<StateVector, 4>{make(1, 2, 1.0), make(1, 2, -1.0), make(0, 3, 1.0), make(0, 3, -1.0)};
    }();
    return basis;
}

const std::array<std::string, 4>& bell_labels()
{
    static const std::array<std::string, 4> labels{"psi+", "psi-", "phi+", "phi-"};
    return labels;
}

UnitaryGate PclDecomposition::product() const
{
    return lcp_not * pcl_not * lcp_rotation * pcl_not * lcp_not;
}

UnitaryGate pcl_rotation(double xi, double chi)
{
    return UnitaryGate(block_diag(ry(xi).matrix(), ry(chi).matrix()));
}

PclDecomposition pcl_decomposition(double xi, double chi)
{
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix x = sigma_x().matrix();
    return PclDecomposition{
        .lcp_not = UnitaryGate(kron2(id, projector(0)) + kron2(x, projector(1))),
        .pcl_not = UnitaryGate(kron2(projector(0), id) + kron2(projector(1), x)),
        .lcp_rotation = UnitaryGate(kron2(ry(xi).matrix(), projector(0)) + kron2(ry(-chi).matrix(), projector(1))),
    };
}

}  // namespace pqclone
