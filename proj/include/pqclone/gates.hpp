#pragma once

// Concrete states, unitaries and measurements for cloning the pair
// |phi_+-(theta)> = cos(theta)|1> +- sin(theta)|0>.
//
// Two-qubit matrices are written on |first second>; pass the targets to
// apply_gate in that order.

#include "pqclone/statekit.hpp"

#include <array>
#include <string_view>

namespace pqclone {

enum class Sign { plus = 1, minus = -1 };

inline int sign_value(Sign s) { return static_cast<int>(s); }
inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

// Single-qubit primitives.
UnitaryGate identity_gate(int arity);
UnitaryGate sigma_x();
UnitaryGate sigma_z();
/// [[cos a/2, sin a/2], [-sin a/2, cos a/2]]
UnitaryGate ry(double angle);

StateVector phi_state(double theta, Sign sign);

/// theta_3 with cos 2 theta_3 = cos 2 theta_1 cos 2 theta_2, in [0, pi/4].
double merged_angle(double theta1, double theta2);

/// How d_gate fills the two columns the defining relation leaves free.
enum class DGateCompletion {
    /// Gram-Schmidt of |00>, |01>, |10>, |11> against the fixed columns.
    gram_schmidt,
    /// The Gram-Schmidt columns swapped and negated; used to check that no
    /// protocol result depends on the choice.
    alternate,
};

/// D(theta1, theta2): D|phi_+-(theta3)>|1> = |phi_+-(theta1)>|phi_+-(theta2)>.
/// Throws std::domain_error for angles outside [0, pi/4] or theta1 = theta2 = 0.
UnitaryGate d_gate(double theta1, double theta2, DGateCompletion completion = DGateCompletion::gram_schmidt);

/// D |i>|1> for i in {0, 1}: the two columns fixed by the defining relation.
StateVector d_gate_column(double theta1, double theta2, int i);

/// Compression chain on `count` qubits: maps |phi_+-(theta)>^count to
/// |phi_+-(theta_count)> (x) |1>^(count-1), with qubit 1 (the first factor)
/// carrying the merged state. Built as D^dagger(theta_j, theta) on particles
/// (1, j+1) for j = 1 .. count-1. Its adjoint spreads theta_count back out.
UnitaryGate d_chain(int count, double theta, DGateCompletion completion = DGateCompletion::gram_schmidt);

/// Residue left on particles 2..count by d_chain: |1>^(count-1).
StateVector d_chain_residue(int count);

/// Probe rotation angle omega of the copy-count reduction M -> N.
double reduction_omega(int copies, int targets, double theta);

/// Probe rotation fired when the system qubit is |1>; identity on |0>.
/// Written on |system probe>, |P0> = |0>, |P1> = |1>. The probe block is
/// [[cos w, -sin w], [sin w, cos w]] so that
///   U |phi_+-(theta_M)>|P0> = sqrt(g)|phi_+-(theta_N)>|P0> + sqrt(1-g)|1>|P1>.
UnitaryGate controlled_probe_rotation(double omega);

/// controlled_probe_rotation(reduction_omega(M, N, theta)); 1 <= M < N.
UnitaryGate reduction_u(int copies, int targets, double theta);

/// M0 = diag(sin t, cos t), M1 = diag(cos t, sin t) on {|0>, |1>}; t in [0, pi/2].
GeneralizedMeasurement povm_pair(double theta);

/// Probe dilation of povm_pair(theta).
struct DilatedMeasurement {
    /// blockdiag(R_y(-pi + 2 theta), R_y(-2 theta)) on |system probe>.
    UnitaryGate unitary;
    /// |P0> = |0> of the probe.
    StateVector probe_ready_state;
    double theta = 0.0;
};

/// Throws std::invalid_argument when `povm` was not built from `theta`.
DilatedMeasurement dilate(const GeneralizedMeasurement& povm, double theta);

/// Runs the dilation: attaches a probe below `target`'s register, applies
/// the dilation unitary, measures the probe. Outcome index = probe value, and
/// post_state excludes the probe.
MeasurementOutcome measure_dilated(const StateVector& state, const DilatedMeasurement& dilated, int target, Rng& rng);

enum class BellOutcome { psi_plus = 0, psi_minus = 1, phi_plus = 2, phi_minus = 3 };

std::string_view to_string(BellOutcome outcome);

/// Psi+, Psi-, Phi+, Phi- (index = BellOutcome), written on |XS>.
const std::array<StateVector, 4>& bell_basis();
const std::array<std::string, 4>& bell_labels();

/// PCL rotation and its five-factor optical decomposition. Written on
/// |polarization location>, polarization above location.
struct PclDecomposition {
    /// Flips polarization when the location is |P1>.
    UnitaryGate lcp_not;
    /// Flips location when the polarization is |1>.
    UnitaryGate pcl_not;
    /// R_y(xi) on polarization for location |P0>, R_y(-chi) for |P1>.
    UnitaryGate lcp_rotation;

    UnitaryGate product() const;
};

/// blockdiag(R_y(xi), R_y(chi)).
UnitaryGate pcl_rotation(double xi, double chi);
PclDecomposition pcl_decomposition(double xi, double chi);

}  // namespace pqclone
