#include "pqclone/analytics.hpp"
#include "pqclone/teleclone.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pqclone;

namespace {

constexpr double kPi = std::numbers::pi;
const Sign kSigns[] = {Sign::plus, Sign::minus};

}  // namespace

TEST(StepAngles, ChainBookkeeping)
{
    const StepAngles a = step_angles(2, 4, 0.3);
    EXPECT_DOUBLE_EQ(a.input, chain_angle(0.3, 3));
    EXPECT_DOUBLE_EQ(a.carry, chain_angle(0.3, 2));
    EXPECT_DOUBLE_EQ(a.clone, 0.3);
    EXPECT_THROW(step_angles(4, 4, 0.3), std::out_of_range);
    EXPECT_THROW(step_angles(1, 3, 0.0), std::domain_error);
}

TEST(Resource, IdealResourceIsNormalizedAndOrdered)
{
    const ResourceState r = ideal_resource(1, 3, kPi / 6);
    EXPECT_NEAR(r.state.norm(), 1.0, 1e-14);
    // Upper half (S = 1) carries -|phi_0>/sqrt 2.
    const StateVector phi0 = resource_pair_state(1, 3, kPi / 6, 0);
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(std::abs(r.state[4 + static_cast<std::size_t>(i)] + phi0[static_cast<std::size_t>(i)] / std::sqrt(2.0)),
                    0.0, 1e-14);
    }
    EXPECT_NEAR(r.p1 + r.p_minus1, 1.0, 1e-14);
}

TEST(Resource, GhzBranchesSplitIntoTwoParityClasses)
{
    for (int n = 2; n <= 6; ++n) {
        for (int j = 1; j < n; ++j) {
            const double theta = 0.35;
            const ResourceState ideal = ideal_resource(j, n, theta);
            const StateVector skew = parity_minus_resource(j, n, theta);
            double plus = 0.0;
            double minus = 0.0;
            for (const auto& b : ghz_preparation_branches(j, n, theta)) {
                EXPECT_EQ(b.parity, (b.outcome_s + b.outcome_a + b.outcome_c) % 2 == 0 ? 1 : -1);
                (b.parity == 1 ? plus : minus) += b.probability;
                EXPECT_TRUE(equal_up_to_phase(b.state, b.parity == 1 ? ideal.state : skew, 1e-9));
            }
            const double s2 = std::sin(2 * step_angles(j, n, theta).input);
            EXPECT_NEAR(plus, s2 * s2 / 2, 1e-10);
            EXPECT_NEAR(minus, (2 - s2 * s2) / 2, 1e-10);
        }
    }
}

TEST(Resource, SampledPreparationMatchesBranchProbabilities)
{
    Rng rng(31);
    const int n = 20000;
    int plus = 0;
    for (int i = 0; i < n; ++i) {
        plus += prepare_from_ghz(1, 2, kPi / 6, rng).parity == 1 ? 1 : 0;
    }
    const double p = ideal_resource(1, 2, kPi / 6).p1;
    EXPECT_NEAR(static_cast<double>(plus) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Resource, ProbeMergedResourceEqualsMixture)
{
    for (double theta : {0.1, kPi / 6, kPi / 4}) {
        const Matrix diff = mixed_resource(1, 3, theta).entries() - mixed_resource_closed_form(1, 3, theta).entries();
        EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(BellExpansion, ComponentsReassembleTheJointState)
{
    for (Sign s : kSigns) {
        for (int parity : {1, -1}) {
            const double theta = 0.4;
            const StepAngles a = step_angles(1, 3, theta);
            const StateVector resource = parity == 1 ? ideal_resource(1, 3, theta).state : parity_minus_resource(1, 3, theta);
            const StateVector joint = tensor(phi_state(a.input, s), resource);
            Vector rebuilt = Vector::Zero(16);
            for (const auto& c : bell_components(parity, 1, 3, theta, s)) {
                const Vector& b = bell_basis()[static_cast<std::size_t>(c.outcome)].amplitudes();
                for (int i = 0; i < 4; ++i) {
                    rebuilt.segment(4 * i, 4) += b(i) * c.pair;
                }
            }
            EXPECT_LT((rebuilt - joint.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Alpha, EntangledExceptAtQuarterPi)
{
    const int first[] = {1};
    for (Sign s : kSigns) {
        for (double theta : {0.1, 0.3, 0.6}) {
            const auto c = schmidt_coefficients(alpha_state(1, 2, theta, s), first);
            EXPECT_EQ(schmidt_rank(c), 2);
        }
        EXPECT_EQ(schmidt_rank(schmidt_coefficients(alpha_state(1, 2, kPi / 4, s), first)), 1);
        const StepAngles a = step_angles(1, 2, 0.3);
        const StateVector mirrored = tensor(phi_state(a.carry, flip(s)), phi_state(a.clone, flip(s)));
        EXPECT_NEAR(std::abs(mirrored.inner(alpha_state(1, 2, 0.3, s))), 0.0, 1e-10);
    }
}

TEST(Step, PsiOutcomesDeliverExactProducts)
{
    Rng rng(8);
    for (Sign s : kSigns) {
        for (int trial = 0; trial < 200; ++trial) {
            const double theta = 0.5;
            const StepAngles a = step_angles(1, 3, theta);
            const ResourceState r = prepare_from_ghz(1, 3, theta, rng);
            const StepResult out = teleclone_step(phi_state(a.input, s), r, BellDetector::full, rng);
            if (out.success) {
                EXPECT_NEAR(fidelity(*out.carry, phi_state(a.carry, s)), 1.0, 1e-9);
                EXPECT_NEAR(fidelity(*out.clone, phi_state(a.clone, s)), 1.0, 1e-9);
                EXPECT_EQ(out.reason, FailureReason::none);
            } else {
                EXPECT_EQ(out.reason, FailureReason::phi_outcome);
                EXPECT_FALSE(out.carry.has_value());
            }
        }
    }
}

TEST(Step, InterferometricDetectorLabelsFailures)
{
    Rng rng(2);
    int failures = 0;
    for (int i = 0; i < 100; ++i) {
        const StepResult out = teleclone_step(phi_state(chain_angle(0.3, 2), Sign::plus), ideal_resource(1, 2, 0.3),
                                              BellDetector::interferometric, rng);
        if (!out.success) {
            ++failures;
            EXPECT_EQ(out.reason, FailureReason::detector_inconclusive);
        }
    }
    EXPECT_GT(failures, 0);
}

TEST(Step, IdealResourceSucceedsHalfTheTime)
{
    for (double theta : {0.1, 0.5, kPi / 4}) {
        const StepAngles a = step_angles(1, 4, theta);
        const auto branches = teleclone_step_branches(phi_state(a.input, Sign::plus),
                                                      DensityMatrix::pure(ideal_resource(1, 4, theta).state));
        EXPECT_NEAR(branches[0].trace().real() + branches[1].trace().real(), 0.5, 1e-12);
    }
}

TEST(Probability, ClosedFormOracles)
{
    EXPECT_NEAR(step_probability(1, 2, kPi / 6), 15.0 / 32.0, 1e-12);
    EXPECT_NEAR(step_probability(1, 2, kPi / 4), 0.5, 1e-12);
    EXPECT_NEAR(overall_probability(2, 3, kPi / 6), 13.0 / 49.0, 1e-12);
    EXPECT_NEAR(overall_probability(1, 2, kPi / 4), 0.5, 1e-12);
    EXPECT_NEAR(chain_success_probability(4, 0.3, PrepMode::ideal), 0.125, 0.0);
    EXPECT_THROW(overall_probability(3, 3, 0.2), std::domain_error);
}

TEST(Compression, HeraldedOutputAndFailureResidue)
{
    Rng rng(4);
    const double theta = kPi / 6;
    int ok = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto r = compress_copy(phi_state(theta, Sign::minus), 1, 3, theta, rng);
        if (r.success) {
            ++ok;
            EXPECT_NEAR(fidelity(r.state, phi_state(chain_angle(theta, 3), Sign::minus)), 1.0, 1e-12);
        } else {
            EXPECT_NEAR(std::norm(r.state[1]), 1.0, 1e-12);
        }
    }
    const double g = success_gamma(1, 3, theta);
    EXPECT_NEAR(static_cast<double>(ok) / n, g, 4 * std::sqrt(g * (1 - g) / n));
}

TEST(Protocol, ConfigValidation)
{
    EXPECT_THROW((ProtocolConfig{.copies = 2, .targets = 2, .theta = 0.3}.validate()), std::invalid_argument);
    EXPECT_THROW((ProtocolConfig{.copies = 1, .targets = 9, .theta = 0.3}.validate()), std::invalid_argument);
    EXPECT_THROW((ProtocolConfig{.copies = 1, .targets = 3, .theta = 0.9}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((ProtocolConfig{.copies = 1, .targets = 3, .theta = kPi / 4}.validate()));
}

TEST(Protocol, SuccessfulTrialsDeliverNExactClones)
{
    for (Sign s : kSigns) {
        for (PrepMode prep : {PrepMode::ideal, PrepMode::ghz}) {
            const ProtocolConfig c{.copies = 3, .targets = 4, .theta = 0.4, .secret_sign = s, .prep = prep};
            for (std::uint64_t t = 0; t < 200; ++t) {
                Rng rng = trial_rng(5, t);
                const TrialRecord r = run_trial(c, rng);
                EXPECT_LE(r.chains_attempted, r.compressed_copies);
                if (!r.succeeded) {
                    EXPECT_EQ(r.copies_delivered, 0);
                    EXPECT_EQ(r.chains_attempted, r.compressed_copies);
                    continue;
                }
                EXPECT_EQ(r.copies_delivered, 4);
                ASSERT_EQ(r.final_clone_fidelities.size(), 4U);
                for (double f : r.final_clone_fidelities) {
                    EXPECT_NEAR(f, 1.0, 1e-9);
                }
                EXPECT_EQ(r.bell_outcomes.back().size(), 3U);
                EXPECT_EQ(r.spare_compressed_copies, r.compressed_copies - r.chains_attempted);
                int steps = 0;
                for (const auto& chain : r.bell_outcomes) {
                    steps += static_cast<int>(chain.size());
                }
                EXPECT_EQ(r.ghz_consumed, steps);
                EXPECT_EQ(r.bell_measurements, steps);
            }
        }
    }
}

TEST(Protocol, TranscriptDoesNotRevealTheSign)
{
    // Outcome statistics are sign independent, so the same stream produces the
    // same transcript for either secret.
    for (std::uint64_t t = 0; t < 100; ++t) {
        ProtocolConfig c{.copies = 2, .targets = 3, .theta = 0.3, .prep = PrepMode::ghz};
        Rng a = trial_rng(9, t);
        const TrialRecord plus = run_trial(c, a);
        c.secret_sign = Sign::minus;
        Rng b = trial_rng(9, t);
        const TrialRecord minus = run_trial(c, b);
        EXPECT_EQ(plus.transcript, minus.transcript);
    }
}

TEST(Simulate, DeterministicAcrossThreadCounts)
{
    const ProtocolConfig c{.copies = 2, .targets = 3, .theta = 0.5, .prep = PrepMode::ghz};
    const SessionReport a = simulate(c, 2000, 77, 1);
    const SessionReport b = simulate(c, 2000, 77, 4);
    EXPECT_EQ(a.successes, b.successes);
    EXPECT_EQ(a.bell_outcome_counts, b.bell_outcome_counts);
    EXPECT_EQ(a.ghz_consumed, b.ghz_consumed);
    const SessionReport other = simulate(c, 2000, 78, 1);
    EXPECT_NE(a.bell_outcome_counts, other.bell_outcome_counts);
}

TEST(Simulate, RatesAgreeWithClosedForms)
{
    const ProtocolConfig c{.copies = 2, .targets = 3, .theta = kPi / 6};
    const SessionReport r = simulate(c, 20000, 3, 1);
    EXPECT_NEAR(r.analytic_success_rate, 13.0 / 49.0, 1e-12);
    EXPECT_TRUE(r.within_3sigma) << r.empirical_success_rate;
    EXPECT_TRUE(r.ledger_consistent);
    for (const auto& s : r.per_step) {
        EXPECT_TRUE(s.within_3sigma) << s.step;
    }
}

TEST(Robustness, ZeroNoiseAndContraction)
{
    const ProtocolConfig c{.copies = 1, .targets = 3, .theta = kPi / 6};
    const RobustnessReport zero = robustness_study(c, NoiseKind::depolarizing, 0.0, 100, 1);
    EXPECT_EQ(zero.input_trace_distance, 0.0);
    EXPECT_EQ(zero.output_trace_distance, 0.0);
    EXPECT_EQ(zero.success_shift, 0.0);
    EXPECT_LT(zero.conditional_output_trace_distance, 1e-12);
    for (NoiseKind k : {NoiseKind::depolarizing, NoiseKind::dephasing}) {
        for (double e : {0.05, 0.3, 0.7, 1.0}) {
            const RobustnessReport r = robustness_study(c, k, e, 0, 1);
            EXPECT_TRUE(r.contraction_holds);
            EXPECT_GT(r.input_trace_distance, 0.0);
        }
    }
    EXPECT_NEAR(robustness_study(c, NoiseKind::depolarizing, 1.0, 0, 1).input_trace_distance, 1.75, 1e-10);
    EXPECT_THROW(robustness_study(c, NoiseKind::dephasing, 1.5, 0, 1), std::invalid_argument);
}
