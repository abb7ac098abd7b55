#pragma once

// Remote probabilistic cloning over shared three-qubit resources.
//
// Alice compresses each of her M copies of |phi_+-(theta)> into
// |phi_+-(theta_N)> (heralded, success probability gamma_1N), then runs a
// chain of N-1 teleported D-gate steps. Step j consumes one resource on
// (S, A, C_j), Bell-measures (X, S), and on a Psi outcome leaves
// |phi_+-(theta_{N-j})>_A |phi_+-(theta_1)>_{C_j}; the A output feeds the
// next step and, after the last one, is handed to C_N.
//
// Register layout for one step: tensor(X, S, A, C) so X = 3, S = 2, A = 1,
// C = 0. Resource states live on tensor(S, A, C): S = 2, A = 1, C = 0.

#include "pqclone/gates.hpp"
#include "pqclone/statekit.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pqclone {

namespace layout {
inline constexpr int kX = 3;
inline constexpr int kS = 2;
inline constexpr int kA = 1;
inline constexpr int kC = 0;
}  // namespace layout

enum class PrepMode { ideal, ghz };
enum class BellDetector { full, interferometric };
enum class FailureReason { none, phi_outcome, detector_inconclusive };

std::string_view to_string(PrepMode mode);
std::string_view to_string(BellDetector detector);
std::string_view to_string(FailureReason reason);

/// Angles involved in step j of an N-target chain.
struct StepAngles {
    double input = 0.0;  ///< theta_{N-j+1}, carried by the X qubit
    double carry = 0.0;  ///< theta_{N-j}, left on A
    double clone = 0.0;  ///< theta_1, delivered to C_j
    double h = 0.0;      ///< cos(input)
    double t = 0.0;      ///< sin(input)
};

StepAngles step_angles(int step, int targets, double theta);

struct ResourceState {
    StateVector state;
    /// +1 for the ideal three-qubit resource, -1 for the skewed GHZ branch.
    int parity = 1;
    int step = 1;
    /// Probabilities of the two parity classes when preparing from GHZ.
    double p1 = 0.0;
    double p_minus1 = 0.0;
};

/// (|0>_S |phi_1^j> - |1>_S |phi_0^j>) / sqrt 2 with |phi_i^j> = D_j|i>|1>.
ResourceState ideal_resource(int step, int targets, double theta,
                             DGateCompletion completion = DGateCompletion::gram_schmidt);

/// D_j(theta_{N-j}, theta_1)|i>|1> on (A, C).
StateVector resource_pair_state(int step, int targets, double theta, int i);

/// (|000> + |111>) / sqrt 2.
StateVector ghz_state();

/// kappa of the parity -1 branch.
double resource_kappa(int step, int targets, double theta);

/// kappa ((t/h)|0>_S|phi_0^j> - (h/t)|1>_S|phi_1^j>).
StateVector parity_minus_resource(int step, int targets, double theta);

/// One outcome pattern of the local GHZ conversion.
struct PrepBranch {
    int outcome_s = 0;
    int outcome_a = 0;
    int outcome_c = 0;
    double probability = 0.0;
    StateVector state;
    int parity = 1;
};

/// The local conversion applied to GHZ before any measurement:
/// R_y(pi/2) on S, R_y(-pi/2) on A and C.
StateVector rotated_ghz();

/// All eight (S, A, C) outcome patterns of the local conversion, each with its
/// normalized post-correction state. Zero-probability patterns are dropped.
std::vector<PrepBranch> ghz_preparation_branches(int step, int targets, double theta);

/// Samples the local conversion: rotations, then the S, A and C generalized
/// measurements (angles theta_{N-j+1}, theta_{N-j}, theta_1) with sigma_x on
/// any party that reads 1.
ResourceState prepare_from_ghz(int step, int targets, double theta, Rng& rng);

/// The same conversion run coherently with a location probe per party; the
/// probes are then traced out, merging the two output paths.
DensityMatrix mixed_resource(int step, int targets, double theta);

/// p1 |xi_1><xi_1| + p_-1 |xi_-1><xi_-1|.
DensityMatrix mixed_resource_closed_form(int step, int targets, double theta);

/// One term of the Bell-basis expansion of |phi_+-(theta_{N-j+1})>_X (x) resource.
struct BellComponent {
    BellOutcome outcome;
    /// Unnormalized (A, C) vector multiplying |outcome>_XS.
    Vector pair;
};

/// Closed-form expansion for the ideal (+1) or skewed (-1) resource.
std::array<BellComponent, 4> bell_components(int parity, int step, int targets, double theta, Sign sign);

/// Residual of a Phi- outcome with the ideal resource:
/// (+-1 / sin 2 theta_{N-j+1}) (|phi_+-phi_+-> - cos 2 theta_{N-j+1} |phi_-+phi_-+>).
StateVector alpha_state(int step, int targets, double theta, Sign sign);

struct StepResult {
    BellOutcome outcome = BellOutcome::psi_minus;
    double probability = 0.0;
    bool success = false;
    FailureReason reason = FailureReason::none;
    /// (A, C) state after the sigma_z (x) sigma_z correction where one applies.
    StateVector residual;
    std::optional<StateVector> carry;  ///< A on success
    std::optional<StateVector> clone;  ///< C_j on success
};

/// Bell-measures (X, S) of input (x) resource. Psi- needs no correction,
/// Psi+ gets sigma_z (x) sigma_z on (A, C); Phi outcomes are failures.
StepResult teleclone_step(const StateVector& input, const ResourceState& resource, BellDetector detector, Rng& rng);

/// Unnormalized, corrected (A, C) conditional states for each Bell outcome
/// given a mixed resource; traces sum to 1.
std::array<Matrix, 4> teleclone_step_branches(const StateVector& input, const DensityMatrix& resource);

struct CompressionResult {
    bool success = false;
    double probability = 0.0;
    StateVector state;
};

/// Heralded |phi_+-(theta_k)> -> |phi_+-(theta_N)> via reduction_u(k, N, theta)
/// and a fresh probe. On failure the system is left in |1>.
CompressionResult compress_copy(const StateVector& input, int from_copies, int targets, double theta, Rng& rng);

/// Success probability of one GHZ-prepared step:
/// p1/2 + p_-1 kappa^2 = sin^2(2 theta_{N-j+1}) / 2 (both routes are
/// evaluated and must agree to 1e-12).
double step_probability(int step, int targets, double theta);

/// Overall success with ideal resources (step rate 1/2 each):
/// sum_k C(M,k) g^k (1-g)^(M-k) (1 - (1 - 2^(1-N))^k), g = gamma_1N.
double overall_probability(int copies, int targets, double theta);

/// Same retry bookkeeping with an arbitrary per-chain success probability.
double overall_probability(int copies, int targets, double theta, double chain_success);

/// Probability that one full chain of N-1 steps succeeds in the given mode.
double chain_success_probability(int targets, double theta, PrepMode prep);

// Reference values printed alongside reports.
inline constexpr double kTeleCnotProbability = 1.0 / 8.0;
inline constexpr double kThreeCnotDProbability = 1.0 / 512.0;

struct ProtocolConfig {
    int copies = 1;
    int targets = 2;
    double theta = 0.0;
    /// Known only to the verifier; the protocol never reads it.
    Sign secret_sign = Sign::plus;
    PrepMode prep = PrepMode::ideal;
    BellDetector detector = BellDetector::interferometric;
    DGateCompletion completion = DGateCompletion::gram_schmidt;

    /// Throws std::invalid_argument unless 1 <= M < N <= 8 and theta in (0, pi/4].
    void validate() const;
};

struct TrialRecord {
    bool succeeded = false;
    /// N on success, 0 otherwise.
    int copies_delivered = 0;
    int compressed_copies = 0;
    /// Compressed copies left untouched after a successful chain.
    int spare_compressed_copies = 0;
    int chains_attempted = 0;
    /// Bell outcomes, one list per attempted chain.
    std::vector<std::vector<BellOutcome>> bell_outcomes;
    /// Per-step attempts and successes (index j-1).
    std::vector<int> step_attempts;
    std::vector<int> step_successes;
    int ghz_consumed = 0;
    int bell_measurements = 0;
    /// Steps in the chain that completed (N-1 on success).
    int completed_chain_steps = 0;
    /// Verifier-side fidelity of C_1 .. C_N to the secret input.
    std::vector<double> final_clone_fidelities;
    /// Sign-free transcript: compression heralds, prep parities and Bell labels.
    std::string transcript;
};

TrialRecord run_trial(const ProtocolConfig& config, Rng& rng);

/// Independent stream for trial `index` of a session seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);

struct StepStatistics {
    int step = 1;
    long long attempts = 0;
    long long successes = 0;
    double empirical_rate = 0.0;
    double analytic_rate = 0.0;
    double std_error = 0.0;
    bool within_3sigma = false;
};

struct SessionReport {
    ProtocolConfig config;
    long long trials = 0;
    std::uint64_t seed = 0;
    long long successes = 0;
    double empirical_success_rate = 0.0;
    /// Binomial standard error at the analytic rate.
    double std_error = 0.0;
    double analytic_success_rate = 0.0;
    bool within_3sigma = false;
    std::vector<StepStatistics> per_step;
    long long ghz_consumed = 0;
    long long bell_measurements = 0;
    long long chains_attempted = 0;
    long long spare_compressed_copies = 0;
    /// Every success consumed exactly N-1 resources and N-1 Bell measurements
    /// in its completed chain.
    bool ledger_consistent = true;
    /// Smallest clone fidelity seen on any success (1 when there were none).
    double min_clone_fidelity = 1.0;
    std::array<long long, 4> bell_outcome_counts{};
};

/// Runs `trials` independent trials; the result depends only on (config,
/// trials, seed), not on `threads`.
SessionReport simulate(const ProtocolConfig& config, long long trials, std::uint64_t seed, unsigned threads = 0);

struct RobustnessReport {
    NoiseKind noise = NoiseKind::depolarizing;
    double epsilon = 0.0;
    /// Tr|GHZ - sigma| for the corrupted resource sigma.
    double input_trace_distance = 0.0;
    /// Trace distance between the ideal and noisy protocol outputs, each the
    /// block-diagonal collection of corrected (A, C) branches flagged by the
    /// Bell outcome. A trace-preserving map of the resource.
    double output_trace_distance = 0.0;
    /// Distance between the target product state and the noisy state
    /// conditioned on success.
    double conditional_output_trace_distance = 0.0;
    double success_ideal = 0.0;
    double success_noisy = 0.0;
    double success_shift = 0.0;
    long long trials = 0;
    double empirical_success_rate = 0.0;
    bool contraction_holds = false;
};

/// Corrupts the GHZ resource of step 1 qubit-by-qubit with `noise` at
/// strength `epsilon`, propagates both resources through the preparation and
/// Bell step as density matrices, and samples `trials` noisy runs.
RobustnessReport robustness_study(const ProtocolConfig& config, NoiseKind noise, double epsilon, long long trials,
                                  std::uint64_t seed);

}  // namespace pqclone
