#include "pqclone/teleclone.hpp"

#include "pqclone/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace pqclone {

namespace {

using namespace layout;

constexpr int kResourceS = 2;
constexpr int kResourceA = 1;
constexpr int kResourceC = 0;

Matrix pauli_x_power(int m)
{
    return m == 0 ? Matrix::Identity(2, 2) : sigma_x().matrix();
}

UnitaryGate zz()
{
    return kron(sigma_z(), sigma_z());
}

// Kraus operator for one party of the local conversion: M_m(angle) then
// sigma_x if m = 1.
Matrix correction_kraus(double angle, int m)
{
    return pauli_x_power(m) * povm_pair(angle).kraus(m);
}

double binomial(int n, int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

StateVector resource_from_pair(const StateVector& phi0, const StateVector& phi1)
{
    const double r = std::numbers::sqrt2 / 2;
    Vector v(8);
    v.head(4) = r * phi1.amplitudes();
    v.tail(4) = -r * phi0.amplitudes();
    return StateVector(std::move(v));
}

Matrix symmetrize(const Matrix& m)
{
    return 0.5 * (m + m.adjoint());
}

// Prep instrument with both paths merged, applied to a 3-qubit (S, A, C)
// operator that has already been through the local rotations.
Matrix merged_preparation(const Matrix& rotated, const StepAngles& angles)
{
    Matrix out = Matrix::Zero(8, 8);
    const int s[] = {kResourceS};
    const int a[] = {kResourceA};
    const int c[] = {kResourceC};
    for (int ms = 0; ms < 2; ++ms) {
        for (int ma = 0; ma < 2; ++ma) {
            for (int mc = 0; mc < 2; ++mc) {
                const Matrix k = embed(correction_kraus(angles.input, ms), s, 3) *
                                 embed(correction_kraus(angles.carry, ma), a, 3) *
                                 embed(correction_kraus(angles.clone, mc), c, 3);
                out += k * rotated * k.adjoint();
            }
        }
    }
    return symmetrize(out);
}

Matrix local_rotation()
{
    return kron(kron(ry(std::numbers::pi / 2), ry(-std::numbers::pi / 2)), ry(-std::numbers::pi / 2)).matrix();
}

}  // namespace

std::string_view to_string(PrepMode mode)
{
    return mode == PrepMode::ideal ? "ideal" : "ghz";
}

std::string_view to_string(BellDetector detector)
{
    return detector == BellDetector::full ? "full" : "interferometric";
}

std::string_view to_string(FailureReason reason)
{
    switch (reason) {
    case FailureReason::none:
        return "none";
    case FailureReason::phi_outcome:
        return "phi_outcome";
    case FailureReason::detector_inconclusive:
        return "detector_inconclusive";
    }
    return "?";
}

StepAngles step_angles(int step, int targets, double theta)
{
    if (targets < 2 || step < 1 || step > targets - 1) {
        throw std::out_of_range("step index must satisfy 1 <= j <= N-1");
    }
    if (!(theta > 0.0) || theta > std::numbers::pi / 4 + 1e-12) {
        throw std::domain_error("theta must lie in (0, pi/4]");
    }
    StepAngles out;
    out.input = chain_angle(theta, targets - step + 1);
    out.carry = chain_angle(theta, targets - step);
    out.clone = chain_angle(theta, 1);
    out.h = std::cos(out.input);
    out.t = std::sin(out.input);
    return out;
}

StateVector resource_pair_state(int step, int targets, double theta, int i)
{
    const StepAngles angles = step_angles(step, targets, theta);
    return d_gate_column(angles.carry, angles.clone, i);
}

ResourceState ideal_resource(int step, int targets, double theta, DGateCompletion completion)
{
    const StepAngles angles = step_angles(step, targets, theta);
    const UnitaryGate d = d_gate(angles.carry, angles.clone, completion);
    const int pair[] = {1, 0};
    const StateVector phi0 = apply_gate(StateVector::basis(2, 0b01), d, pair);
    const StateVector phi1 = apply_gate(StateVector::basis(2, 0b11), d, pair);
    const double sin2 = std::sin(2 * angles.input);
    const double cos2 = std::cos(2 * angles.input);
    return ResourceState{
        .state = resource_from_pair(phi0, phi1),
        .parity = 1,
        .step = step,
        .p1 = sin2 * sin2 / 2,
        .p_minus1 = (1 + cos2 * cos2) / 2,
    };
}

StateVector ghz_state()
{
    Vector v = Vector::Zero(8);
    v(0) = std::numbers::sqrt2 / 2;
    v(7) = std::numbers::sqrt2 / 2;
    return StateVector(std::move(v));
}

double resource_kappa(int step, int targets, double theta)
{
    const double c = std::cos(2 * step_angles(step, targets, theta).input);
    return std::sqrt((1 - c * c) / (2 * (1 + c * c)));
}

StateVector parity_minus_resource(int step, int targets, double theta)
{
    const StepAngles angles = step_angles(step, targets, theta);
    const double kappa = resource_kappa(step, targets, theta);
    const StateVector phi0 = resource_pair_state(step, targets, theta, 0);
    const StateVector phi1 = resource_pair_state(step, targets, theta, 1);
    Vector v(8);
    v.head(4) = kappa * (angles.t / angles.h) * phi0.amplitudes();
    v.tail(4) = -kappa * (angles.h / angles.t) * phi1.amplitudes();
    return StateVector::normalized(std::move(v));
}

StateVector rotated_ghz()
{
    const int all[] = {kResourceS, kResourceA, kResourceC};
    return StateVector(apply_operator(ghz_state().amplitudes(), local_rotation(), all));
}

std::vector<PrepBranch> ghz_preparation_branches(int step, int targets, double theta)
{
    const StepAngles angles = step_angles(step, targets, theta);
    const StateVector start = rotated_ghz();
    const int s[] = {kResourceS};
    const int a[] = {kResourceA};
    const int c[] = {kResourceC};
    std::vector<PrepBranch> out;
    for (int ms = 0; ms < 2; ++ms) {
        for (int ma = 0; ma < 2; ++ma) {
            for (int mc = 0; mc < 2; ++mc) {
                Vector v = apply_operator(start.amplitudes(), correction_kraus(angles.input, ms), s);
                v = apply_operator(v, correction_kraus(angles.carry, ma), a);
                v = apply_operator(v, correction_kraus(angles.clone, mc), c);
                const double p = v.squaredNorm();
                if (p < kNegligibleProbability) {
                    continue;
                }
                out.push_back(PrepBranch{
                    .outcome_s = ms,
                    .outcome_a = ma,
                    .outcome_c = mc,
                    .probability = p,
                    .state = StateVector::normalized(std::move(v)),
                    .parity = (ms + ma + mc) % 2 == 0 ? 1 : -1,
                });
            }
        }
    }
    return out;
}

ResourceState prepare_from_ghz(int step, int targets, double theta, Rng& rng)
{
    const StepAngles angles = step_angles(step, targets, theta);
    StateVector state = rotated_ghz();
    int ones = 0;
    const std::pair<int, double> parties[] = {
        {kResourceS, angles.input},
        {kResourceA, angles.carry},
        {kResourceC, angles.clone},
    };
    for (const auto& [qubit, angle] : parties) {
        auto outcome = apply_generalized_measurement(state, povm_pair(angle), qubit, rng);
        state = std::move(outcome.post_state);
        if (outcome.index == 1) {
            const int target[] = {qubit};
            state = apply_gate(state, sigma_x(), target);
            ++ones;
        }
    }
    const double sin2 = std::sin(2 * angles.input);
    const double cos2 = std::cos(2 * angles.input);
    return ResourceState{
        .state = std::move(state),
        .parity = ones % 2 == 0 ? 1 : -1,
        .step = step,
        .p1 = sin2 * sin2 / 2,
        .p_minus1 = (1 + cos2 * cos2) / 2,
    };
}

DensityMatrix mixed_resource(int step, int targets, double theta)
{
    const StepAngles angles = step_angles(step, targets, theta);
    // Register: S = 5, A = 4, C = 3, probes P_S = 2, P_A = 1, P_C = 0.
    StateVector joint = tensor(ghz_state(), StateVector::basis(3, 0));
    const int systems[] = {5, 4, 3};
    joint = StateVector(apply_operator(joint.amplitudes(), local_rotation(), systems));

    Matrix controlled_x = Matrix::Zero(4, 4);  // on |probe system>
    controlled_x(0, 0) = 1.0;
    controlled_x(1, 1) = 1.0;
    controlled_x(2, 3) = 1.0;
    controlled_x(3, 2) = 1.0;
    const UnitaryGate correct(controlled_x);

    const double angle_of[] = {angles.input, angles.carry, angles.clone};
    for (int party = 0; party < 3; ++party) {
        const int system = systems[party];
        const int probe = 2 - party;
        const DilatedMeasurement d = dilate(povm_pair(angle_of[party]), angle_of[party]);
        const int pair[] = {system, probe};
        joint = apply_gate(joint, d.unitary, pair);
        const int control_target[] = {probe, system};
        joint = apply_gate(joint, correct, control_target);
    }
    return partial_trace(DensityMatrix::pure(joint), systems);
}

DensityMatrix mixed_resource_closed_form(int step, int targets, double theta)
{
    const ResourceState ideal = ideal_resource(step, targets, theta);
    const StateVector skew = parity_minus_resource(step, targets, theta);
    const Matrix rho = ideal.p1 * DensityMatrix::pure(ideal.state).entries() +
                       ideal.p_minus1 * DensityMatrix::pure(skew).entries();
    return DensityMatrix(symmetrize(rho));
}

std::array<BellComponent, 4> bell_components(int parity, int step, int targets, double theta, Sign sign)
{
    const StepAngles angles = step_angles(step, targets, theta);
    const double s = sign_value(sign);
    const double h = angles.h;
    const double t = angles.t;
    const Vector phi0 = resource_pair_state(step, targets, theta, 0).amplitudes();
    const Vector phi1 = resource_pair_state(step, targets, theta, 1).amplitudes();

    if (parity == 1) {
        return {{
            {BellOutcome::psi_plus, 0.5 * (h * phi1 - s * t * phi0)},
            {BellOutcome::psi_minus, -0.5 * (h * phi1 + s * t * phi0)},
            {BellOutcome::phi_plus, 0.5 * s * (t * phi1 - s * h * phi0)},
            {BellOutcome::phi_minus, 0.5 * s * (t * phi1 + s * h * phi0)},
        }};
    }
    if (parity != -1) {
        throw std::invalid_argument("bell_components: parity must be +1 or -1");
    }
    const double kappa = resource_kappa(step, targets, theta);
    const double eta = 2 * kappa / std::sin(2 * angles.input);
    const double r = std::numbers::sqrt2 / 2;
    const double h3 = h * h * h;
    const double t3 = t * t * t;
    return {{
        {BellOutcome::psi_plus, -s * kappa * r * (h * phi1 - s * t * phi0)},
        {BellOutcome::psi_minus, -s * kappa * r * (h * phi1 + s * t * phi0)},
        {BellOutcome::phi_plus, -eta * r * (h3 * phi1 - s * t3 * phi0)},
        {BellOutcome::phi_minus, eta * r * (h3 * phi1 + s * t3 * phi0)},
    }};
}

StateVector alpha_state(int step, int targets, double theta, Sign sign)
{
    const StepAngles angles = step_angles(step, targets, theta);
    const StateVector same = tensor(phi_state(angles.carry, sign), phi_state(angles.clone, sign));
    const StateVector other = tensor(phi_state(angles.carry, flip(sign)), phi_state(angles.clone, flip(sign)));
    const Vector v = (sign_value(sign) / std::sin(2 * angles.input)) *
                     (same.amplitudes() - std::cos(2 * angles.input) * other.amplitudes());
    return StateVector(v);
}

StepResult teleclone_step(const StateVector& input, const ResourceState& resource, BellDetector detector, Rng& rng)
{
    if (input.qubit_count() != 1 || resource.state.qubit_count() != 3) {
        throw std::invalid_argument("teleclone_step: expects a 1-qubit input and a 3-qubit resource");
    }
    const StateVector joint = tensor(input, resource.state);
    const int xs[] = {kX, kS};
    const auto& basis = bell_basis();
    auto outcome = measure_in_basis(joint, basis, xs, rng, bell_labels());
    const auto bell = static_cast<BellOutcome>(outcome.index);

    StateVector residual = *outcome.residual;
    if (bell == BellOutcome::psi_plus) {
        const int ac[] = {kA, kC};
        residual = apply_gate(residual, zz(), ac);
    }
    const bool success = bell == BellOutcome::psi_plus || bell == BellOutcome::psi_minus;
    StepResult result{
        .outcome = bell,
        .probability = outcome.probability,
        .success = success,
        .reason = success                                  ? FailureReason::none
                  : detector == BellDetector::interferometric ? FailureReason::detector_inconclusive
                                                              : FailureReason::phi_outcome,
        .residual = residual,
        .carry = std::nullopt,
        .clone = std::nullopt,
    };
    if (success) {
        const int a[] = {kA};
        auto [carry, clone] = split_product(residual, a);
        result.carry = std::move(carry);
        result.clone = std::move(clone);
    }
    return result;
}

std::array<Matrix, 4> teleclone_step_branches(const StateVector& input, const DensityMatrix& resource)
{
    if (input.qubit_count() != 1 || resource.qubit_count() != 3) {
        throw std::invalid_argument("teleclone_step_branches: expects a 1-qubit input and a 3-qubit resource");
    }
    const DensityMatrix joint = tensor(DensityMatrix::pure(input), resource);
    const int xs[] = {kX, kS};
    const int ac[] = {kA, kC};
    const Matrix correction = embed(zz().matrix(), ac, 2);
    std::array<Matrix, 4> out;
    for (std::size_t b = 0; b < 4; ++b) {
        const Vector& v = bell_basis()[b].amplitudes();
        const Matrix projector = embed(v * v.adjoint(), xs, 4);
        Matrix branch = partial_trace(projector * joint.entries() * projector, 4, ac);
        if (static_cast<BellOutcome>(b) == BellOutcome::psi_plus) {
            branch = correction * branch * correction.adjoint();
        }
        out[b] = symmetrize(branch);
    }
    return out;
}

CompressionResult compress_copy(const StateVector& input, int from_copies, int targets, double theta, Rng& rng)
{
    if (input.qubit_count() != 1) {
        throw std::invalid_argument("compress_copy: expects a single qubit");
    }
    const StateVector joint = tensor(input, StateVector::basis(1, 0));
    const int system_probe[] = {1, 0};
    const StateVector evolved = apply_gate(joint, reduction_u(from_copies, targets, theta), system_probe);
    const StateVector probe_basis[] = {StateVector::basis(1, 0), StateVector::basis(1, 1)};
    const int probe[] = {0};
    auto outcome = measure_in_basis(evolved, probe_basis, probe, rng);
    return CompressionResult{
        .success = outcome.index == 0,
        .probability = outcome.probability,
        .state = *outcome.residual,
    };
}

double step_probability(int step, int targets, double theta)
{
    const StepAngles angles = step_angles(step, targets, theta);
    const double sin2 = std::sin(2 * angles.input);
    const double cos2 = std::cos(2 * angles.input);
    const double kappa = resource_kappa(step, targets, theta);
    const double by_branches = (sin2 * sin2 / 2) * 0.5 + ((1 + cos2 * cos2) / 2) * kappa * kappa;
    const double closed = sin2 * sin2 / 2;
    const double by_power = (1 - std::pow(std::cos(2 * theta), 2 * (targets - step + 1))) / 2;
    if (std::abs(by_branches - closed) > 1e-12 || std::abs(by_power - closed) > 1e-12) {
        throw std::logic_error("step_probability: closed forms disagree");
    }
    return closed;
}

double overall_probability(int copies, int targets, double theta, double chain_success)
{
    if (copies < 1 || copies >= targets) {
        throw std::domain_error("overall_probability: need 1 <= M < N");
    }
    if (!(chain_success >= 0.0 && chain_success <= 1.0)) {
        throw std::domain_error("overall_probability: chain success must be a probability");
    }
    const double g = success_gamma(1, targets, theta);
    double total = 0.0;
    for (int k = 1; k <= copies; ++k) {
        total += binomial(copies, k) * std::pow(g, k) * std::pow(1 - g, copies - k) *
                 (1 - std::pow(1 - chain_success, k));
    }
    return total;
}

double overall_probability(int copies, int targets, double theta)
{
    return overall_probability(copies, targets, theta, std::pow(0.5, targets - 1));
}

double chain_success_probability(int targets, double theta, PrepMode prep)
{
    if (prep == PrepMode::ideal) {
        return std::pow(0.5, targets - 1);
    }
    double q = 1.0;
    for (int j = 1; j < targets; ++j) {
        q *= step_probability(j, targets, theta);
    }
    return q;
}

void ProtocolConfig::validate() const
{
    if (copies < 1 || copies >= targets) {
        throw std::invalid_argument("protocol needs 1 <= M < N");
    }
    if (targets > 8) {
        throw std::invalid_argument("protocol supports at most N = 8 targets");
    }
    if (!(theta > 0.0) || theta > std::numbers::pi / 4 + 1e-12) {
        throw std::invalid_argument("protocol needs theta in (0, pi/4]");
    }
}

TrialRecord run_trial(const ProtocolConfig& config, Rng& rng)
{
    config.validate();
    const int n = config.targets;
    const StateVector secret = phi_state(config.theta, config.secret_sign);

    TrialRecord record;
    record.step_attempts.assign(static_cast<std::size_t>(n - 1), 0);
    record.step_successes.assign(static_cast<std::size_t>(n - 1), 0);

    // Compression of every copy, M x (1 -> N).
    std::vector<StateVector> compressed;
    record.transcript += "c:";
    for (int i = 0; i < config.copies; ++i) {
        auto result = compress_copy(secret, 1, n, config.theta, rng);
        record.transcript += result.success ? '1' : '0';
        if (result.success) {
            compressed.push_back(std::move(result.state));
        }
    }
    record.compressed_copies = static_cast<int>(compressed.size());

    // One chain per compressed copy until a chain completes.
    std::vector<StateVector> clones;
    for (const StateVector& start : compressed) {
        ++record.chains_attempted;
        record.bell_outcomes.emplace_back();
        record.transcript += "|";
        clones.clear();
        StateVector carry = start;
        bool chain_ok = true;
        for (int j = 1; j < n; ++j) {
            const ResourceState resource = config.prep == PrepMode::ideal
                                               ? ideal_resource(j, n, config.theta, config.completion)
                                               : prepare_from_ghz(j, n, config.theta, rng);
            ++record.ghz_consumed;
            ++record.bell_measurements;
            ++record.step_attempts[static_cast<std::size_t>(j - 1)];
            if (config.prep == PrepMode::ghz) {
                record.transcript += resource.parity > 0 ? "p+" : "p-";
            }
            StepResult step = teleclone_step(carry, resource, config.detector, rng);
            record.bell_outcomes.back().push_back(step.outcome);
            record.transcript += to_string(step.outcome);
            record.transcript += ' ';
            if (!step.success) {
                chain_ok = false;
                break;
            }
            ++record.step_successes[static_cast<std::size_t>(j - 1)];
            clones.push_back(std::move(*step.clone));
            carry = std::move(*step.carry);
        }
        if (chain_ok) {
            // The last A output goes to C_N.
            clones.push_back(std::move(carry));
            record.succeeded = true;
            record.completed_chain_steps = n - 1;
            break;
        }
    }

    if (record.succeeded) {
        record.copies_delivered = n;
        record.spare_compressed_copies = record.compressed_copies - record.chains_attempted;
        for (const auto& c : clones) {
            record.final_clone_fidelities.push_back(fidelity(c, secret));
        }
    }
    return record;
}

Rng trial_rng(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

namespace {

struct Tally {
    long long successes = 0;
    std::vector<long long> step_attempts;
    std::vector<long long> step_successes;
    long long ghz = 0;
    long long bell = 0;
    long long chains = 0;
    long long spare = 0;
    bool ledger_ok = true;
    double min_fidelity = 1.0;
    std::array<long long, 4> bell_counts{};

    explicit Tally(int steps)
        : step_attempts(static_cast<std::size_t>(steps), 0)
        , step_successes(static_cast<std::size_t>(steps), 0)
    {
    }

    void add(const TrialRecord& r, int targets)
    {
        if (r.succeeded) {
            ++successes;
            if (r.completed_chain_steps != targets - 1 ||
                static_cast<int>(r.bell_outcomes.back().size()) != targets - 1) {
                ledger_ok = false;
            }
            for (double f : r.final_clone_fidelities) {
                min_fidelity = std::min(min_fidelity, f);
            }
        }
        for (std::size_t j = 0; j < step_attempts.size(); ++j) {
            step_attempts[j] += r.step_attempts[j];
            step_successes[j] += r.step_successes[j];
        }
        ghz += r.ghz_consumed;
        bell += r.bell_measurements;
        chains += r.chains_attempted;
        spare += r.spare_compressed_copies;
        for (const auto& chain : r.bell_outcomes) {
            for (BellOutcome b : chain) {
                ++bell_counts[static_cast<std::size_t>(b)];
            }
        }
    }

    void merge(const Tally& o)
    {
        successes += o.successes;
        for (std::size_t j = 0; j < step_attempts.size(); ++j) {
            step_attempts[j] += o.step_attempts[j];
            step_successes[j] += o.step_successes[j];
        }
        ghz += o.ghz;
        bell += o.bell;
        chains += o.chains;
        spare += o.spare;
        ledger_ok = ledger_ok && o.ledger_ok;
        min_fidelity = std::min(min_fidelity, o.min_fidelity);
        for (std::size_t b = 0; b < 4; ++b) {
            bell_counts[b] += o.bell_counts[b];
        }
    }
};

bool within_three_sigma(double empirical, double analytic, double sigma)
{
    return std::abs(empirical - analytic) <= 3 * sigma + 1e-15;
}

}  // namespace

SessionReport simulate(const ProtocolConfig& config, long long trials, std::uint64_t seed, unsigned threads)
{
    config.validate();
    if (trials < 1) {
        throw std::invalid_argument("simulate: need at least one trial");
    }
    const int steps = config.targets - 1;
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<long long>(threads, trials));

    std::vector<Tally> partial(threads, Tally(steps));
    auto work = [&](unsigned w) {
        const long long begin = trials * w / threads;
        const long long end = trials * (w + 1) / threads;
        for (long long t = begin; t < end; ++t) {
            Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
            partial[w].add(run_trial(config, rng), config.targets);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back(work, w);
        }
    }
    Tally total(steps);
    for (const auto& p : partial) {
        total.merge(p);
    }

    SessionReport report;
    report.config = config;
    report.trials = trials;
    report.seed = seed;
    report.successes = total.successes;
    report.empirical_success_rate = static_cast<double>(total.successes) / static_cast<double>(trials);
    report.analytic_success_rate = overall_probability(
        config.copies, config.targets, config.theta, chain_success_probability(config.targets, config.theta, config.prep));
    report.std_error =
        std::sqrt(report.analytic_success_rate * (1 - report.analytic_success_rate) / static_cast<double>(trials));
    report.within_3sigma =
        within_three_sigma(report.empirical_success_rate, report.analytic_success_rate, report.std_error);
    for (int j = 1; j <= steps; ++j) {
        StepStatistics s;
        s.step = j;
        s.attempts = total.step_attempts[static_cast<std::size_t>(j - 1)];
        s.successes = total.step_successes[static_cast<std::size_t>(j - 1)];
        s.analytic_rate = config.prep == PrepMode::ideal ? 0.5 : step_probability(j, config.targets, config.theta);
        if (s.attempts > 0) {
            s.empirical_rate = static_cast<double>(s.successes) / static_cast<double>(s.attempts);
            s.std_error = std::sqrt(s.analytic_rate * (1 - s.analytic_rate) / static_cast<double>(s.attempts));
            s.within_3sigma = within_three_sigma(s.empirical_rate, s.analytic_rate, s.std_error);
        } else {
            s.within_3sigma = true;
        }
        report.per_step.push_back(s);
    }
    report.ghz_consumed = total.ghz;
    report.bell_measurements = total.bell;
    report.chains_attempted = total.chains;
    report.spare_compressed_copies = total.spare;
    report.ledger_consistent = total.ledger_ok;
    report.min_clone_fidelity = total.min_fidelity;
    report.bell_outcome_counts = total.bell_counts;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

std::array<Matrix, 4> protocol_output(const DensityMatrix& ghz_resource, const StateVector& input,
                                      const StepAngles& angles)
{
    const Matrix r = local_rotation();
    const Matrix prepared = merged_preparation(r * ghz_resource.entries() * r.adjoint(), angles);
    return teleclone_step_branches(input, DensityMatrix(prepared));
}

}  // namespace

RobustnessReport robustness_study(const ProtocolConfig& config, NoiseKind noise, double epsilon, long long trials,
                                  std::uint64_t seed)
{
    config.validate();
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("robustness_study: epsilon must lie in [0, 1]");
    }
    if (trials < 0) {
        throw std::invalid_argument("robustness_study: trials must be non-negative");
    }
    const StepAngles angles = step_angles(1, config.targets, config.theta);
    const StateVector input = phi_state(angles.input, config.secret_sign);

    const DensityMatrix ideal = DensityMatrix::pure(ghz_state());
    const DensityMatrix noisy = apply_noise(ideal, noise, epsilon);

    RobustnessReport report;
    report.noise = noise;
    report.epsilon = epsilon;
    report.trials = trials;
    report.input_trace_distance = trace_distance(ideal, noisy);

    const auto ideal_out = protocol_output(ideal, input, angles);
    const auto noisy_out = protocol_output(noisy, input, angles);
    for (std::size_t b = 0; b < 4; ++b) {
        report.output_trace_distance += trace_norm(ideal_out[b] - noisy_out[b]);
    }
    const auto psi_p = static_cast<std::size_t>(BellOutcome::psi_plus);
    const auto psi_m = static_cast<std::size_t>(BellOutcome::psi_minus);
    report.success_ideal = (ideal_out[psi_p] + ideal_out[psi_m]).trace().real();
    report.success_noisy = (noisy_out[psi_p] + noisy_out[psi_m]).trace().real();
    report.success_shift = report.success_noisy - report.success_ideal;

    const StateVector target =
        tensor(phi_state(angles.carry, config.secret_sign), phi_state(angles.clone, config.secret_sign));
    if (report.success_noisy > kNegligibleProbability) {
        const Matrix conditioned = (noisy_out[psi_p] + noisy_out[psi_m]) / report.success_noisy;
        report.conditional_output_trace_distance = trace_norm(DensityMatrix::pure(target).entries() - conditioned);
    }
    report.contraction_holds = report.output_trace_distance <= report.input_trace_distance + 1e-9;

    if (trials > 0) {
        // Sample the noisy instrument: preparation pattern, then Bell outcome.
        const Matrix r = local_rotation();
        const Matrix rotated = r * noisy.entries() * r.adjoint();
        const int s[] = {kResourceS};
        const int a[] = {kResourceA};
        const int c[] = {kResourceC};
        std::vector<double> pattern_prob;
        std::vector<std::array<double, 4>> bell_prob;
        for (int ms = 0; ms < 2; ++ms) {
            for (int ma = 0; ma < 2; ++ma) {
                for (int mc = 0; mc < 2; ++mc) {
                    const Matrix k = embed(correction_kraus(angles.input, ms), s, 3) *
                                     embed(correction_kraus(angles.carry, ma), a, 3) *
                                     embed(correction_kraus(angles.clone, mc), c, 3);
                    const Matrix branch = symmetrize(k * rotated * k.adjoint());
                    const double p = branch.trace().real();
                    pattern_prob.push_back(p);
                    std::array<double, 4> bp{};
                    if (p >= kNegligibleProbability) {
                        const auto split = teleclone_step_branches(input, DensityMatrix(branch / p));
                        for (std::size_t b = 0; b < 4; ++b) {
                            bp[b] = split[b].trace().real();
                        }
                    }
                    bell_prob.push_back(bp);
                }
            }
        }
        long long hits = 0;
        for (long long t = 0; t < trials; ++t) {
            Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
            const std::size_t pattern = sample_index(pattern_prob, rng);
            const std::size_t b = sample_index(bell_prob[pattern], rng);
            if (b == psi_p || b == psi_m) {
                ++hits;
            }
        }
        report.empirical_success_rate = static_cast<double>(hits) / static_cast<double>(trials);
    }
    return report;
}

}  // namespace pqclone
