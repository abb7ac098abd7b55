#pragma once

// Closed-form bookkeeping for composite probabilistic-cloning strategies:
// per-share success probabilities, the distribution of delivered copies, and
// the expectation / failure figures used to compare strategies.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pqclone {

/// `count` independent attempts at k -> n cloning.
struct CloneShare {
    int k = 1;
    int n = 1;
    int count = 1;

    friend bool operator==(const CloneShare&, const CloneShare&) = default;
};

class StrategyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class StrategyParseError : public StrategyError {
public:
    StrategyParseError(const std::string& message, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A partition of the input copies into cloning shares.
///
/// Shares are kept sorted by (k, n); two shares with the same (k, n) are
/// merged by adding their counts. Text form: "2x(1->3),1x(2->3)", whitespace
/// ignored.
class Strategy {
public:
    explicit Strategy(std::vector<CloneShare> shares);

    static Strategy parse(std::string_view text);
    std::string to_string() const;

    const std::vector<CloneShare>& shares() const { return shares_; }
    /// Sum of k * count over all shares.
    int input_copies() const;
    /// Sum of n * count over all shares: the largest possible yield.
    int max_output() const;
    /// Largest n among the shares; the natural cloning goal.
    int largest_target() const;
    /// Throws StrategyError unless input_copies() == copies.
    void require_input_copies(int copies) const;

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    std::vector<CloneShare> shares_;
};

/// PMF over the number of delivered copies.
class ProbabilitySpectrum {
public:
    ProbabilitySpectrum() = default;
    explicit ProbabilitySpectrum(std::map<int, double> pmf);

    const std::map<int, double>& pmf() const { return pmf_; }
    double at(int copies) const;
    double total() const;

private:
    std::map<int, double> pmf_;
};

/// theta_j with cos 2 theta_j = (cos 2 theta)^j.
double chain_angle(double theta, int j);

/// Success probability of k -> n cloning of the pair {phi_+(theta), phi_-(theta)}:
/// (1 - t^k) / (1 - t^n), t = cos 2 theta, with the t -> 1 limit k / n at theta = 0.
double success_gamma(int k, int n, double theta);

/// Copy-count distribution computed by convolving per-share binomials.
ProbabilitySpectrum spectrum(const Strategy& strategy, double theta);
/// Same distribution by brute-force enumeration of every success vector.
ProbabilitySpectrum spectrum_enumerated(const Strategy& strategy, double theta);

double expected_copies(const ProbabilitySpectrum& spectrum);
/// Probability of ending with fewer than `goal` copies.
double failure_probability(const ProbabilitySpectrum& spectrum, int goal);

/// Whole-batch M -> N cloning (index 1) against M independent 1 -> N attempts
/// (index 2), both with goal N.
struct StrategyComparison {
    double e1 = 0.0;
    double e2 = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
};

StrategyComparison compare_strategies(int copies, int targets, double theta);

}  // namespace pqclone
