#include "pqclone/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace pqclone {

namespace {

constexpr double kAngleSlack = 1e-12;

void check_angle(double theta, const char* who)
{
    if (!(theta >= -kAngleSlack && theta <= std::numbers::pi / 4 + kAngleSlack)) {
        throw std::domain_error(std::string(who) + ": theta must lie in [0, pi/4]");
    }
}

double clamp_angle(double theta)
{
    return std::clamp(theta, 0.0, std::numbers::pi / 4);
}

// cos 2 theta, exactly 0 at theta = pi/4.
double pair_overlap(double theta)
{
    return std::sin(2.0 * (std::numbers::pi / 4 - theta));
}

// 1 - (cos 2 theta)^power without cancellation near theta = 0.
double one_minus_t_pow(double theta, int power)
{
    const double t = pair_overlap(theta);
    if (t <= 0.5) {
        return 1.0 - std::pow(std::max(t, 0.0), power);
    }
    const double s = std::sin(theta);
    return -std::expm1(power * std::log1p(-2.0 * s * s));
}

double t_pow(double theta, int power)
{
    return std::pow(std::max(pair_overlap(theta), 0.0), power);
}

double binomial(int n, int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------

StrategyParseError::StrategyParseError(const std::string& message, std::size_t position)
    : StrategyError(message + " at position " + std::to_string(position))
    , position_(position)
{
}

Strategy::Strategy(std::vector<CloneShare> shares)
{
    if (shares.empty()) {
        throw StrategyError("strategy has no shares");
    }
    for (const auto& s : shares) {
        if (s.k < 1 || s.count < 1) {
            throw StrategyError("share " + std::to_string(s.count) + "x(" + std::to_string(s.k) + "->" +
                                std::to_string(s.n) + ") needs k >= 1 and count >= 1");
        }
        if (s.n < s.k) {
            throw StrategyError("share " + std::to_string(s.count) + "x(" + std::to_string(s.k) + "->" +
                                std::to_string(s.n) + ") has fewer outputs than inputs");
        }
    }
    std::sort(shares.begin(), shares.end(),
              [](const CloneShare& a, const CloneShare& b) { return std::tie(a.k, a.n) < std::tie(b.k, b.n); });
    for (const auto& s : shares) {
        if (!shares_.empty() && shares_.back().k == s.k && shares_.back().n == s.n) {
            shares_.back().count += s.count;
        } else {
            shares_.push_back(s);
        }
    }
}

namespace {

class DslCursor {
public:
    explicit DslCursor(std::string_view text)
        : text_(text)
    {
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool at_end()
    {
        skip_space();
        return pos_ >= text_.size();
    }

    bool accept(std::string_view token)
    {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token)
    {
        if (!accept(token)) {
            throw StrategyParseError("expected '" + std::string(token) + "'", pos_);
        }
    }

    int integer()
    {
        skip_space();
        const std::size_t start = pos_;
        long long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1'000'000) {
                throw StrategyParseError("integer too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw StrategyParseError("expected a positive integer", start);
        }
        return static_cast<int>(value);
    }

    std::size_t position() const { return pos_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Strategy Strategy::parse(std::string_view text)
{
    DslCursor cur(text);
    std::vector<CloneShare> shares;
    if (cur.at_end()) {
        throw StrategyParseError("empty strategy", 0);
    }
    do {
        CloneShare share;
        share.count = cur.integer();
        if (!cur.accept("x") && !cur.accept("X")) {
            throw StrategyParseError("expected 'x'", cur.position());
        }
        cur.expect("(");
        share.k = cur.integer();
        cur.expect("->");
        share.n = cur.integer();
        cur.expect(")");
        shares.push_back(share);
    } while (cur.accept(","));
    if (!cur.at_end()) {
        throw StrategyParseError("unexpected trailing input", cur.position());
    }
    return Strategy(std::move(shares));
}

std::string Strategy::to_string() const
{
    std::string out;
    for (const auto& s : shares_) {
        if (!out.empty()) {
            out += ',';
        }
        out += std::to_string(s.count) + "x(" + std::to_string(s.k) + "->" + std::to_string(s.n) + ")";
    }
    return out;
}

int Strategy::input_copies() const
{
    int total = 0;
    for (const auto& s : shares_) {
        total += s.k * s.count;
    }
    return total;
}

int Strategy::max_output() const
{
    int total = 0;
    for (const auto& s : shares_) {
        total += s.n * s.count;
    }
    return total;
}

int Strategy::largest_target() const
{
    int best = 0;
    for (const auto& s : shares_) {
        best = std::max(best, s.n);
    }
    return best;
}

void Strategy::require_input_copies(int copies) const
{
    if (input_copies() != copies) {
        throw StrategyError("strategy " + to_string() + " uses " + std::to_string(input_copies()) +
                            " input copies but " + std::to_string(copies) + " were declared");
    }
}

// ---------------------------------------------------------------------------

ProbabilitySpectrum::ProbabilitySpectrum(std::map<int, double> pmf)
    : pmf_(std::move(pmf))
{
    for (const auto& [x, p] : pmf_) {
        if (x < 0 || !(p >= -1e-15 && p <= 1.0 + 1e-12)) {
            throw std::invalid_argument("ProbabilitySpectrum: entry out of range");
        }
    }
}

double ProbabilitySpectrum::at(int copies) const
{
    const auto it = pmf_.find(copies);
    return it == pmf_.end() ? 0.0 : it->second;
}

double ProbabilitySpectrum::total() const
{
    double sum = 0.0;
    for (const auto& [x, p] : pmf_) {
        sum += p;
    }
    return sum;
}

double chain_angle(double theta, int j)
{
    check_angle(theta, "chain_angle");
    if (j < 1) {
        throw std::domain_error("chain_angle: j must be >= 1");
    }
    theta = clamp_angle(theta);
    if (j == 1) {
        return theta;
    }
    // sin^2 theta_j = (1 - t^j) / 2
    return std::asin(std::sqrt(0.5 * one_minus_t_pow(theta, j)));
}

double success_gamma(int k, int n, double theta)
{
    check_angle(theta, "success_gamma");
    if (k < 1 || n < k) {
        throw std::domain_error("success_gamma: need 1 <= k <= n");
    }
    theta = clamp_angle(theta);
    const double den = one_minus_t_pow(theta, n);
    if (den == 0.0) {
        return static_cast<double>(k) / n;
    }
    return std::min(1.0, one_minus_t_pow(theta, k) / den);
}

ProbabilitySpectrum spectrum(const Strategy& strategy, double theta)
{
    std::map<int, double> pmf{{0, 1.0}};
    for (const auto& share : strategy.shares()) {
        const double g = success_gamma(share.k, share.n, theta);
        std::map<int, double> next;
        for (int succ = 0; succ <= share.count; ++succ) {
            const double w = binomial(share.count, succ) * std::pow(g, succ) * std::pow(1.0 - g, share.count - succ);
            if (w == 0.0) {
                continue;
            }
            for (const auto& [x, p] : pmf) {
                next[x + succ * share.n] += p * w;
            }
        }
        pmf = std::move(next);
    }
    return ProbabilitySpectrum(std::move(pmf));
}

ProbabilitySpectrum spectrum_enumerated(const Strategy& strategy, double theta)
{
    const auto& shares = strategy.shares();
    double combos = 1.0;
    std::vector<double> gammas;
    for (const auto& s : shares) {
        combos *= s.count + 1;
        gammas.push_back(success_gamma(s.k, s.n, theta));
    }
    if (combos > 5e7) {
        throw StrategyError("spectrum_enumerated: too many success vectors to enumerate");
    }
    std::map<int, double> pmf;
    std::vector<int> g(shares.size(), 0);
    while (true) {
        int x = 0;
        double p = 1.0;
        for (std::size_t i = 0; i < shares.size(); ++i) {
            x += g[i] * shares[i].n;
            p *= binomial(shares[i].count, g[i]) * std::pow(gammas[i], g[i]) *
                 std::pow(1.0 - gammas[i], shares[i].count - g[i]);
        }
        pmf[x] += p;
        std::size_t i = 0;
        while (i < g.size() && ++g[i] > shares[i].count) {
            g[i] = 0;
            ++i;
        }
        if (i == g.size()) {
            break;
        }
    }
    return ProbabilitySpectrum(std::move(pmf));
}

double expected_copies(const ProbabilitySpectrum& spectrum)
{
    double e = 0.0;
    for (const auto& [x, p] : spectrum.pmf()) {
        e += x * p;
    }
    return e;
}

double failure_probability(const ProbabilitySpectrum& spectrum, int goal)
{
    double f = 0.0;
    for (const auto& [x, p] : spectrum.pmf()) {
        if (x < goal) {
            f += p;
        }
    }
    return f;
}

StrategyComparison compare_strategies(int copies, int targets, double theta)
{
    if (copies < 1 || copies >= targets) {
        throw std::domain_error("compare_strategies: need 1 <= M < N");
    }
    check_angle(theta, "compare_strategies");
    theta = clamp_angle(theta);
    const double m = copies;
    const double n = targets;
    StrategyComparison out;
    out.e1 = n * success_gamma(copies, targets, theta);
    out.e2 = m * n * success_gamma(1, targets, theta);
    const double den = one_minus_t_pow(theta, targets);
    if (den == 0.0) {
        out.f1 = 1.0 - m / n;
        out.f2 = std::pow(1.0 - 1.0 / n, m);
        return out;
    }
    out.f1 = t_pow(theta, copies) * one_minus_t_pow(theta, targets - copies) / den;
    out.f2 = std::pow(t_pow(theta, 1) * one_minus_t_pow(theta, targets - 1) / den, m);
    return out;
}

}  // namespace pqclone
