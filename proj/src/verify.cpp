#include "pqclone/verify.hpp"

#include "pqclone/analytics.hpp"
#include "pqclone/gates.hpp"
#include "pqclone/statekit.hpp"
#include "pqclone/teleclone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>

namespace pqclone {

namespace {

constexpr double kPi = std::numbers::pi;

struct Context {
    InjectedFault fault = InjectedFault::none;
    std::uint64_t seed = 0;
};

// Tracks the worst deviation seen against a tolerance.
class Gauge {
public:
    void record(double error, double tol)
    {
        if (!(error <= tol)) {
            ok_ = false;
        }
        worst_ = std::max(worst_, error);
    }
    void require(bool condition, const std::string& what)
    {
        if (!condition) {
            ok_ = false;
            if (note_.empty()) {
                note_ = what;
            }
        }
    }
    CheckResult result(std::string name) const
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "max error %.3g", worst_);
        std::string detail = buf;
        if (!note_.empty()) {
            detail += "; " + note_;
        }
        return CheckResult{std::move(name), ok_, detail};
    }

private:
    bool ok_ = true;
    double worst_ = 0.0;
    std::string note_;
};

double distance(const Vector& a, const Vector& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

double distance_up_to_phase(const Matrix& a, const Matrix& b)
{
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(a(r, c)) == 0.0) {
        return (a - b).cwiseAbs().maxCoeff();
    }
    const Complex phase = b(r, c) / a(r, c);
    return (phase / std::abs(phase) * a - b).cwiseAbs().maxCoeff();
}

double uniform_angle(Rng& rng, double lo = 1e-3, double hi = kPi / 4)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

const Sign kSigns[] = {Sign::plus, Sign::minus};

// ---------------------------------------------------------------------------

CheckResult check_gamma_values(const Context&)
{
    Gauge g;
    g.record(std::abs(success_gamma(1, 2, kPi / 6) - 2.0 / 3.0), 1e-12);
    for (int n = 2; n <= 8; ++n) {
        for (int m = 1; m < n; ++m) {
            g.record(std::abs(success_gamma(m, n, kPi / 4) - 1.0), 1e-12);
            g.record(std::abs(success_gamma(m, n, 1e-4) - static_cast<double>(m) / n), 1e-6);
        }
    }
    return g.result("gamma-values");
}

CheckResult check_strategy_ordering(const Context&)
{
    Gauge g;
    const std::pair<int, int> pairs[] = {{10, 20}, {2, 3}};
    for (const auto& [m, n] : pairs) {
        const Strategy whole({{m, n, 1}});
        const Strategy split({{1, n, m}});
        for (int i = 0; i < 200; ++i) {
            const double theta = 1e-3 + (kPi / 4 - 1e-3) * i / 199.0;
            const StrategyComparison cmp = compare_strategies(m, n, theta);
            g.require(cmp.e2 - cmp.e1 >= -1e-12, "E2 < E1");
            g.require(cmp.f2 - cmp.f1 >= -1e-12, "F1 > F2");
            // The closed forms agree with the spectra they summarize.
            const ProbabilitySpectrum pw = spectrum(whole, theta);
            const ProbabilitySpectrum ps = spectrum(split, theta);
            g.record(std::abs(expected_copies(pw) - cmp.e1), 1e-9 * n * m);
            g.record(std::abs(expected_copies(ps) - cmp.e2), 1e-9 * n * m);
            g.record(std::abs(failure_probability(pw, n) - cmp.f1), 1e-9);
            g.record(std::abs(failure_probability(ps, n) - cmp.f2), 1e-9);
            if (i == 199) {
                g.record(std::abs(cmp.e2 - cmp.e1 - (m - 1) * n), 1e-9);
                g.record(std::abs(cmp.f1 - cmp.f2), 1e-9);
            }
        }
    }
    return g.result("strategy-ordering");
}

CheckResult check_spectrum_oracle(const Context& ctx)
{
    Gauge g;
    Rng rng(ctx.seed);
    std::uniform_int_distribution<int> components(1, 3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<CloneShare> shares;
        int budget = 12;
        const int parts = components(rng);
        for (int p = 0; p < parts && budget > 0; ++p) {
            const int k = std::uniform_int_distribution<int>(1, std::min(budget, 4))(rng);
            const int count = std::uniform_int_distribution<int>(1, budget / k)(rng);
            const int n = k + std::uniform_int_distribution<int>(0, 6)(rng);
            budget -= k * count;
            shares.push_back({k, n, count});
        }
        const Strategy strategy(shares);
        g.require(strategy.input_copies() <= 12, "strategy uses more than 12 copies");
        const double theta = uniform_angle(rng);
        const ProbabilitySpectrum a = spectrum(strategy, theta);
        const ProbabilitySpectrum b = spectrum_enumerated(strategy, theta);
        std::set<int> keys;
        for (const auto& [x, p] : a.pmf()) {
            keys.insert(x);
        }
        for (const auto& [x, p] : b.pmf()) {
            keys.insert(x);
        }
        for (int x : keys) {
            g.record(std::abs(a.at(x) - b.at(x)), 1e-12);
        }
        g.record(std::abs(a.total() - 1.0), 1e-12);
        g.record(std::abs(b.total() - 1.0), 1e-12);
    }
    return g.result("spectrum-oracle");
}

CheckResult check_dsl_roundtrip(const Context& ctx)
{
    Gauge g;
    Rng rng(ctx.seed + 1);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<CloneShare> shares;
        const int parts = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int p = 0; p < parts; ++p) {
            const int k = std::uniform_int_distribution<int>(1, 5)(rng);
            shares.push_back({k, k + std::uniform_int_distribution<int>(0, 9)(rng),
                              std::uniform_int_distribution<int>(1, 5)(rng)});
        }
        const Strategy s(shares);
        const Strategy again = Strategy::parse(s.to_string());
        g.require(again.to_string() == s.to_string(), "render/parse mismatch for " + s.to_string());
        g.require(again.shares() == s.shares(), "share list changed for " + s.to_string());
    }
    bool rejected = false;
    try {
        Strategy::parse("2x(1->3),,1x(2->3)");
    } catch (const StrategyParseError& e) {
        rejected = e.position() == 9;
    }
    g.require(rejected, "malformed DSL not rejected at the right position");
    return g.result("dsl-roundtrip");
}

CheckResult check_d_gate_law(const Context& ctx)
{
    Gauge g;
    Rng rng(ctx.seed + 2);
    const int pair[] = {1, 0};
    for (int trial = 0; trial < 20; ++trial) {
        const double t1 = uniform_angle(rng);
        const double t2 = uniform_angle(rng);
        const double t3 = merged_angle(t1, t2);
        g.record(std::abs(std::cos(2 * t3) - std::cos(2 * t1) * std::cos(2 * t2)), 1e-12);
        for (DGateCompletion completion : {DGateCompletion::gram_schmidt, DGateCompletion::alternate}) {
            const UnitaryGate d = d_gate(t1, t2, completion);
            for (Sign s : kSigns) {
                const StateVector merged = tensor(phi_state(t3, s), StateVector::basis(1, 1));
                const StateVector product = tensor(phi_state(t1, s), phi_state(t2, s));
                g.record(distance(apply_gate(merged, d, pair).amplitudes(), product.amplitudes()), 1e-10);
                g.record(distance(apply_gate(product, d.adjoint(), pair).amplitudes(), merged.amplitudes()), 1e-10);
            }
        }
    }
    return g.result("d-gate-law");
}

CheckResult check_d_chain(const Context& ctx)
{
    Gauge g;
    Rng rng(ctx.seed + 3);
    for (int count = 2; count <= 5; ++count) {
        for (int trial = 0; trial < 4; ++trial) {
            const double theta = trial == 0 ? kPi / 4 : uniform_angle(rng);
            const UnitaryGate chain = d_chain(count, theta);
            std::vector<int> all(static_cast<std::size_t>(count));
            for (int q = 0; q < count; ++q) {
                all[static_cast<std::size_t>(q)] = count - 1 - q;
            }
            for (Sign s : kSigns) {
                StateVector copies = phi_state(theta, s);
                for (int c = 1; c < count; ++c) {
                    copies = tensor(copies, phi_state(theta, s));
                }
                const StateVector expected = tensor(phi_state(chain_angle(theta, count), s), d_chain_residue(count));
                const StateVector out = apply_gate(copies, chain, all);
                g.record(distance(out.amplitudes(), expected.amplitudes()), 1e-10);
                g.record(distance(apply_gate(out, chain.adjoint(), all).amplitudes(), copies.amplitudes()), 1e-10);
            }
        }
    }
    return g.result("d-chain-compression");
}

CheckResult check_reduction(const Context& ctx)
{
    Gauge g;
    const std::pair<int, int> cases[] = {{1, 2}, {1, 3}, {2, 3}, {3, 5}};
    const int system_probe[] = {1, 0};
    for (const auto& [m, n] : cases) {
        for (int i = 1; i <= 10; ++i) {
            const double theta = kPi / 4 * i / 10.0;
            const double gamma = success_gamma(m, n, theta);
            const double omega = reduction_omega(m, n, theta);
            const UnitaryGate u = ctx.fault == InjectedFault::omega_sign ? controlled_probe_rotation(-omega)
                                                                          : reduction_u(m, n, theta);
            for (Sign s : kSigns) {
                const StateVector in = tensor(phi_state(chain_angle(theta, m), s), StateVector::basis(1, 0));
                const StateVector out = apply_gate(in, u, system_probe);
                // sqrt(g)|phi(theta_N)>|P0> + sqrt(1-g)|1>|P1>
                Vector expected = std::sqrt(gamma) *
                                  tensor(phi_state(chain_angle(theta, n), s), StateVector::basis(1, 0)).amplitudes();
                expected(3) += std::sqrt(1 - gamma);
                g.record(distance(out.amplitudes(), expected), 1e-10);
                const double p0 = std::norm(out[0]) + std::norm(out[2]);
                g.record(std::abs(p0 - gamma), 1e-10);
            }
        }
    }
    return g.result("reduction-exact");
}

CheckResult check_dilation(const Context& ctx)
{
    Gauge g;
    Rng rng(ctx.seed + 4);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta = trial == 0 ? kPi / 6 : uniform_angle(rng, 0.0, kPi / 2);
        const GeneralizedMeasurement povm = povm_pair(theta);
        const DilatedMeasurement d = dilate(povm, theta);
        const Matrix& u = d.unitary.matrix();
        // <P_m| U |P0> restricted to the system is M_m.
        for (int m = 0; m < 2; ++m) {
            Matrix block(2, 2);
            for (int out = 0; out < 2; ++out) {
                for (int in = 0; in < 2; ++in) {
                    block(out, in) = u(2 * out + m, 2 * in);
                }
            }
            g.record((block - povm.kraus(m)).cwiseAbs().maxCoeff(), 1e-10);
        }
        const Matrix completeness = povm.m0().adjoint() * povm.m0() + povm.m1().adjoint() * povm.m1();
        g.record((completeness - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    }
    const DilatedMeasurement d = dilate(povm_pair(kPi / 6), kPi / 6);
    const StateVector joint = tensor(StateVector::basis(1, 1), StateVector::basis(1, 0));
    const int pair[] = {1, 0};
    const StateVector out = apply_gate(joint, d.unitary, pair);
    g.record(std::abs(std::norm(out[2]) - 0.75), 1e-12);
    return g.result("dilation-povm");
}

CheckResult check_ghz_preparation(const Context&)
{
    Gauge g;
    for (int n = 2; n <= 6; ++n) {
        for (int j = 1; j < n; ++j) {
            for (double theta : {0.05, 0.3, kPi / 6, kPi / 4}) {
                const ResourceState ideal = ideal_resource(j, n, theta);
                const StateVector skew = parity_minus_resource(j, n, theta);
                double p_plus = 0.0;
                double p_minus = 0.0;
                for (const PrepBranch& b : ghz_preparation_branches(j, n, theta)) {
                    if (b.parity == 1) {
                        p_plus += b.probability;
                        g.record(phase_aligned_distance(b.state.amplitudes(), ideal.state.amplitudes()), 1e-9);
                    } else {
                        p_minus += b.probability;
                        g.record(phase_aligned_distance(b.state.amplitudes(), skew.amplitudes()), 1e-9);
                    }
                }
                g.record(std::abs(p_plus - ideal.p1), 1e-10);
                g.record(std::abs(p_minus - ideal.p_minus1), 1e-10);
                g.record(std::abs(ideal.p1 + ideal.p_minus1 - 1.0), 1e-12);
                const Matrix diff = mixed_resource(j, n, theta).entries() -
                                    mixed_resource_closed_form(j, n, theta).entries();
                g.record(diff.cwiseAbs().maxCoeff(), 1e-9);
            }
        }
    }
    return g.result("ghz-preparation");
}

CheckResult check_bell_expansion(const Context&)
{
    Gauge g;
    const int xs[] = {layout::kX, layout::kS};
    for (int n = 2; n <= 5; ++n) {
        for (int j = 1; j < n; ++j) {
            for (double theta : {0.1, kPi / 6, kPi / 4}) {
                const StepAngles angles = step_angles(j, n, theta);
                for (Sign s : kSigns) {
                    const StateVector input = phi_state(angles.input, s);
                    for (int parity : {1, -1}) {
                        const StateVector resource =
                            parity == 1 ? ideal_resource(j, n, theta).state : parity_minus_resource(j, n, theta);
                        const StateVector joint = tensor(input, resource);
                        for (const BellComponent& c : bell_components(parity, j, n, theta, s)) {
                            const auto b = static_cast<std::size_t>(c.outcome);
                            const Vector direct = project_out(joint.amplitudes(), bell_basis()[b], xs);
                            g.record(distance(direct, c.pair), 1e-10);
                        }
                    }
                }
            }
        }
    }
    return g.result("bell-expansion");
}

CheckResult check_zz_symmetry(const Context&)
{
    Gauge g;
    const UnitaryGate zz = kron(sigma_z(), sigma_z());
    const int ac[] = {1, 0};
    for (int n = 2; n <= 5; ++n) {
        for (int j = 1; j < n; ++j) {
            for (double theta : {0.1, 0.4, kPi / 4}) {
                const StepAngles angles = step_angles(j, n, theta);
                for (Sign s : kSigns) {
                    const StateVector target = tensor(phi_state(angles.carry, s), phi_state(angles.clone, s));
                    const StateVector mirrored =
                        tensor(phi_state(angles.carry, flip(s)), phi_state(angles.clone, flip(s)));
                    g.record(phase_aligned_distance(apply_gate(mirrored, zz, ac).amplitudes(), target.amplitudes()),
                             1e-10);
                    for (int parity : {1, -1}) {
                        const auto comps = bell_components(parity, j, n, theta, s);
                        const Vector& plus = comps[static_cast<std::size_t>(BellOutcome::psi_plus)].pair;
                        const Vector& minus = comps[static_cast<std::size_t>(BellOutcome::psi_minus)].pair;
                        g.record(std::abs(plus.norm() - minus.norm()), 1e-12);
                        const Vector corrected = apply_operator(plus, zz.matrix(), ac);
                        g.record(phase_aligned_distance(corrected.normalized(), target.amplitudes()), 1e-10);
                        g.record(phase_aligned_distance(minus.normalized(), target.amplitudes()), 1e-10);
                    }
                }
            }
        }
    }
    return g.result("zz-symmetry");
}

CheckResult check_mixed_resource(const Context&)
{
    Gauge g;
    for (int n = 2; n <= 4; ++n) {
        for (int j = 1; j < n; ++j) {
            for (double theta : {0.2, kPi / 6, kPi / 4}) {
                const StepAngles angles = step_angles(j, n, theta);
                const DensityMatrix mixed = mixed_resource(j, n, theta);
                for (Sign s : kSigns) {
                    const StateVector input = phi_state(angles.input, s);
                    const Matrix target =
                        DensityMatrix::pure(tensor(phi_state(angles.carry, s), phi_state(angles.clone, s))).entries();
                    const auto branches = teleclone_step_branches(input, mixed);
                    double total = 0.0;
                    for (const Matrix& b : branches) {
                        total += b.trace().real();
                    }
                    g.record(std::abs(total - 1.0), 1e-10);
                    double success = 0.0;
                    for (BellOutcome o : {BellOutcome::psi_plus, BellOutcome::psi_minus}) {
                        const Matrix& b = branches[static_cast<std::size_t>(o)];
                        const double p = b.trace().real();
                        success += p;
                        g.record((b / p - target).cwiseAbs().maxCoeff(), 1e-9);
                    }
                    g.record(std::abs(success - step_probability(j, n, theta)), 1e-10);
                }
            }
        }
    }
    return g.result("mixed-resource");
}

CheckResult check_completion_independence(const Context& ctx)
{
    Gauge g;
    for (double theta : {0.2, kPi / 6, kPi / 4}) {
        for (int n = 2; n <= 4; ++n) {
            for (int j = 1; j < n; ++j) {
                const StateVector a = ideal_resource(j, n, theta, DGateCompletion::gram_schmidt).state;
                const StateVector b = ideal_resource(j, n, theta, DGateCompletion::alternate).state;
                g.record(distance(a.amplitudes(), b.amplitudes()), 1e-12);
            }
        }
    }
    ProtocolConfig config{.copies = 2, .targets = 4, .theta = kPi / 6};
    for (int t = 0; t < 50; ++t) {
        config.completion = DGateCompletion::gram_schmidt;
        Rng r1 = trial_rng(ctx.seed, static_cast<std::uint64_t>(t));
        const TrialRecord first = run_trial(config, r1);
        config.completion = DGateCompletion::alternate;
        Rng r2 = trial_rng(ctx.seed, static_cast<std::uint64_t>(t));
        const TrialRecord second = run_trial(config, r2);
        g.require(first.transcript == second.transcript, "transcripts differ between completions");
    }
    return g.result("completion-independence");
}

CheckResult check_step_probability(const Context&)
{
    Gauge g;
    g.record(std::abs(step_probability(1, 2, kPi / 6) - 15.0 / 32.0), 1e-12);
    g.record(std::abs(step_probability(1, 2, kPi / 4) - 0.5), 1e-12);
    g.record(std::abs(overall_probability(2, 3, kPi / 6) - 13.0 / 49.0), 1e-12);
    g.record(std::abs(overall_probability(1, 2, kPi / 4) - 0.5), 1e-12);
    // Branch sum over the eight preparation patterns and the Psi outcomes.
    const int xs[] = {layout::kX, layout::kS};
    for (int n = 2; n <= 6; ++n) {
        for (int j = 1; j < n; ++j) {
            for (double theta : {0.1, 0.5, kPi / 4}) {
                const StateVector input = phi_state(step_angles(j, n, theta).input, Sign::plus);
                double p = 0.0;
                for (const PrepBranch& b : ghz_preparation_branches(j, n, theta)) {
                    const StateVector joint = tensor(input, b.state);
                    for (BellOutcome o : {BellOutcome::psi_plus, BellOutcome::psi_minus}) {
                        p += b.probability *
                             project_out(joint.amplitudes(), bell_basis()[static_cast<std::size_t>(o)], xs)
                                 .squaredNorm();
                    }
                }
                g.record(std::abs(p - step_probability(j, n, theta)), 1e-10);
            }
        }
    }
    return g.result("step-probability");
}

CheckResult check_trace_distance(const Context& ctx)
{
    Gauge g;
    Rng rng(ctx.seed + 5);
    for (int trial = 0; trial < 100; ++trial) {
        const int q = 1 + trial % 3;
        const StateVector a = random_state(q, rng);
        const StateVector b = random_state(q, rng);
        const double t = trace_distance(DensityMatrix::pure(a), DensityMatrix::pure(b));
        g.record(std::abs(t - 2 * std::sqrt(std::max(0.0, 1 - fidelity(a, b)))), 1e-9);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix a = random_density(2, rng);
        const DensityMatrix b = random_density(2, rng);
        const double before = trace_distance(a, b);
        for (NoiseKind kind : {NoiseKind::depolarizing, NoiseKind::dephasing}) {
            for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const double after = trace_distance(apply_noise(a, kind, eps), apply_noise(b, kind, eps));
                g.require(after <= before + 1e-9, "trace distance grew under noise");
            }
        }
    }
    const DensityMatrix ghz = DensityMatrix::pure(ghz_state());
    g.record(std::abs(trace_distance(ghz, apply_noise(ghz, NoiseKind::depolarizing, 1.0)) - 1.75), 1e-10);
    return g.result("trace-distance");
}

CheckResult check_robustness(const Context& ctx)
{
    Gauge g;
    const ProtocolConfig config{.copies = 1, .targets = 3, .theta = kPi / 6};
    for (NoiseKind kind : {NoiseKind::depolarizing, NoiseKind::dephasing}) {
        for (double eps : {0.0, 0.1, 0.5, 1.0}) {
            const RobustnessReport r = robustness_study(config, kind, eps, 0, ctx.seed);
            g.require(r.contraction_holds, "output distance exceeds input distance");
            if (eps == 0.0) {
                g.record(r.input_trace_distance + r.output_trace_distance + std::abs(r.success_shift), 1e-12);
            }
            if (eps == 1.0 && kind == NoiseKind::depolarizing) {
                g.record(std::abs(r.input_trace_distance - 1.75), 1e-10);
            }
        }
    }
    return g.result("robustness-contraction");
}

CheckResult check_pcl(const Context& ctx)
{
    Gauge g;
    Rng rng(ctx.seed + 6);
    std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const double xi = angle(rng);
        const double chi = angle(rng);
        g.record(distance_up_to_phase(pcl_decomposition(xi, chi).product().matrix(), pcl_rotation(xi, chi).matrix()),
                 1e-10);
    }
    return g.result("pcl-decomposition");
}

CheckResult check_alpha(const Context&)
{
    Gauge g;
    const int first[] = {1};
    for (double theta : {0.1, 0.3, 0.6, kPi / 4}) {
        const StepAngles angles = step_angles(1, 2, theta);
        for (Sign s : kSigns) {
            const StateVector alpha = alpha_state(1, 2, theta, s);
            const auto coeffs = schmidt_coefficients(alpha, first);
            const int expected = theta == kPi / 4 ? 1 : 2;
            g.require(schmidt_rank(coeffs) == expected, "unexpected Schmidt rank");
            const StateVector mirrored = tensor(phi_state(angles.carry, flip(s)), phi_state(angles.clone, flip(s)));
            g.record(std::abs(mirrored.inner(alpha)), 1e-10);
            // It is the normalized Phi- residual of the ideal resource.
            const auto comps = bell_components(1, 1, 2, theta, s);
            const Vector& phi_minus = comps[static_cast<std::size_t>(BellOutcome::phi_minus)].pair;
            g.record(phase_aligned_distance(phi_minus.normalized(), alpha.amplitudes()), 1e-10);
        }
    }
    return g.result("alpha-entanglement");
}

CheckResult check_protocol_ledger(const Context& ctx)
{
    Gauge g;
    for (PrepMode prep : {PrepMode::ideal, PrepMode::ghz}) {
        for (Sign s : kSigns) {
            const ProtocolConfig config{.copies = 2, .targets = 4, .theta = kPi / 6, .secret_sign = s, .prep = prep};
            const SessionReport r = simulate(config, 400, ctx.seed, 1);
            g.require(r.ledger_consistent, "resource ledger inconsistent");
            g.record(1 - r.min_clone_fidelity, 1e-9);
            g.require(r.successes > 0, "no successful trial to inspect");
        }
    }
    return g.result("protocol-ledger");
}

CheckResult check_determinism(const Context& ctx)
{
    Gauge g;
    const ProtocolConfig config{.copies = 2, .targets = 3, .theta = 0.5, .prep = PrepMode::ghz};
    const SessionReport a = simulate(config, 300, ctx.seed, 1);
    const SessionReport b = simulate(config, 300, ctx.seed, 3);
    g.require(a.successes == b.successes && a.ghz_consumed == b.ghz_consumed &&
                  a.bell_outcome_counts == b.bell_outcome_counts,
              "thread count changed the result");
    return g.result("determinism");
}

using CheckFn = std::function<CheckResult(const Context&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry()
{
    static const std::vector<std::pair<std::string, CheckFn>> checks{
        {"gamma-values", check_gamma_values},
        {"strategy-ordering", check_strategy_ordering},
        {"spectrum-oracle", check_spectrum_oracle},
        {"dsl-roundtrip", check_dsl_roundtrip},
        {"d-gate-law", check_d_gate_law},
        {"d-chain-compression", check_d_chain},
        {"reduction-exact", check_reduction},
        {"dilation-povm", check_dilation},
        {"ghz-preparation", check_ghz_preparation},
        {"bell-expansion", check_bell_expansion},
        {"zz-symmetry", check_zz_symmetry},
        {"mixed-resource", check_mixed_resource},
        {"completion-independence", check_completion_independence},
        {"step-probability", check_step_probability},
        {"trace-distance", check_trace_distance},
        {"robustness-contraction", check_robustness},
        {"pcl-decomposition", check_pcl},
        {"alpha-entanglement", check_alpha},
        {"protocol-ledger", check_protocol_ledger},
        {"determinism", check_determinism},
    };
    return checks;
}

}  // namespace

std::vector<std::string> verify_check_names()
{
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) {
        names.push_back(name);
    }
    return names;
}

std::vector<CheckResult> run_verify(const VerifyOptions& options)
{
    const Context ctx{options.fault, options.seed};
    std::vector<CheckResult> out;
    for (const auto& [name, fn] : registry()) {
        if (name.find(options.filter) == std::string::npos) {
            continue;
        }
        try {
            out.push_back(fn(ctx));
        } catch (const std::exception& e) {
            out.push_back(CheckResult{name, false, std::string("threw: ") + e.what()});
        }
    }
    return out;
}

}  // namespace pqclone
