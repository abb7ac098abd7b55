#include "commands.hpp"

#include "pqclone/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace pqclone::cli {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;
// Inputs like 0.7854 are meant as pi/4.
constexpr double kQuarterPiSnap = 1e-4;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double to_radians(double x, bool degrees)
{
    return degrees ? x * std::numbers::pi / 180.0 : x;
}

double snap_theta(double theta)
{
    if (theta > kQuarterPi && theta <= kQuarterPi + kQuarterPiSnap) {
        return kQuarterPi;
    }
    return theta;
}

struct Common {
    std::uint64_t seed = 20240101;
    std::string out;
    std::string format = "csv";
    bool degrees = false;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
    sub->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_flag("--degrees", c.degrees, "Angles are given in degrees");
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw UsageError("cannot open " + path + " for writing");
    }
    f << content;
}

// Writes `content` to --out (plus its manifest) or to `out`.
void emit(const std::string& content, const Common& c, const std::string& command, const Json& parameters,
          std::ostream& out)
{
    if (c.out.empty()) {
        out << content;
        return;
    }
    write_file(c.out, content);
    Json manifest;
    manifest["command"] = command;
    manifest["parameters"] = parameters;
    manifest["seed"] = c.seed;
    manifest["tool_version"] = kToolVersion;
    manifest["timestamp"] = utc_timestamp();
    write_file(c.out + ".manifest.json", manifest.dump(2) + "\n");
}

std::string render(const Table& t, const Common& c)
{
    return c.format == "json" ? t.to_json().dump(2) + "\n" : t.to_csv();
}

}  // namespace

std::string format_number(double x)
{
    if (x == 0.0) {
        return "0";  // no "-0"
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double rounded(double x)
{
    return std::strtod(format_number(x).c_str(), nullptr);
}

std::string Table::to_csv() const
{
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) {
        line(r);
    }
    return out;
}

Json Table::to_json() const
{
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) {
            char* end = nullptr;
            const double v = std::strtod(r[i].c_str(), &end);
            if (!r[i].empty() && end != nullptr && *end == '\0') {
                obj[header[i]] = v;
            } else if (r[i] == "true" || r[i] == "false") {
                obj[header[i]] = r[i] == "true";
            } else {
                obj[header[i]] = r[i];
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

std::vector<double> ThetaGrid::points() const
{
    const double top = hi == 0.0 ? kQuarterPi : hi;
    std::vector<double> pts;
    if (count == 1) {
        pts.push_back(top);
        return pts;
    }
    for (int i = 0; i < count; ++i) {
        pts.push_back(lo + (top - lo) * i / (count - 1));
    }
    return pts;
}

ThetaGrid ThetaGrid::parse(const std::string& spec, bool degrees)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ':')) {
        parts.push_back(part);
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("grid spec must be lo:hi:count, got '" + spec + "'");
    }
    ThetaGrid g;
    try {
        std::size_t used = 0;
        g.lo = snap_theta(to_radians(std::stod(parts[0], &used), degrees));
        if (used != parts[0].size()) {
            throw std::invalid_argument("lo");
        }
        g.hi = snap_theta(to_radians(std::stod(parts[1], &used), degrees));
        if (used != parts[1].size()) {
            throw std::invalid_argument("hi");
        }
        g.count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) {
            throw std::invalid_argument("count");
        }
    } catch (const std::logic_error&) {
        throw std::invalid_argument("grid spec must be lo:hi:count, got '" + spec + "'");
    }
    if (g.count < 1 || g.count > 1'000'000) {
        throw std::invalid_argument("grid count must lie in [1, 1000000]");
    }
    if (!(g.lo >= 0.0 && g.lo <= g.hi && g.hi <= kQuarterPi)) {
        throw std::invalid_argument("grid needs 0 <= lo <= hi <= pi/4");
    }
    if (g.hi == 0.0) {
        throw std::invalid_argument("grid upper end must be positive");
    }
    return g;
}

Table spectrum_table(const Strategy& strategy, double theta)
{
    Table t{{"x", "probability"}, {}};
    const ProbabilitySpectrum pmf = spectrum(strategy, theta);
    for (const auto& [x, p] : pmf.pmf()) {
        t.rows.push_back({std::to_string(x), format_number(p)});
    }
    return t;
}

std::vector<Strategy> default_curve_strategies()
{
    return {Strategy::parse("10x(1->20)"), Strategy::parse("1x(10->20)"), Strategy::parse("2x(1->3)"),
            Strategy::parse("1x(2->3)")};
}

Table curves_table(CurveMode mode, const std::vector<Strategy>& strategies, const ThetaGrid& grid,
                   std::optional<int> goal)
{
    Table t;
    t.header.push_back("theta");
    for (const auto& s : strategies) {
        t.header.push_back(s.to_string());
    }
    for (double theta : grid.points()) {
        std::vector<std::string> row{format_number(theta)};
        for (const auto& s : strategies) {
            const ProbabilitySpectrum pmf = spectrum(s, theta);
            const double v = mode == CurveMode::expectation ? expected_copies(pmf)
                                                            : failure_probability(pmf, goal.value_or(s.largest_target()));
            row.push_back(format_number(v));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Json session_report_json(const SessionReport& r)
{
    const int n = r.config.targets;
    Json j;
    j["config"] = {
        {"copies", r.config.copies},
        {"targets", n},
        {"theta", rounded(r.config.theta)},
        {"prep", std::string(to_string(r.config.prep))},
        {"detector", std::string(to_string(r.config.detector))},
        {"completion", r.config.completion == DGateCompletion::gram_schmidt ? "gram_schmidt" : "alternate"},
        {"secret_sign", r.config.secret_sign == Sign::plus ? "plus" : "minus"},
    };
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["successes"] = r.successes;
    j["empirical_success_rate"] = rounded(r.empirical_success_rate);
    j["analytic_success_rate"] = rounded(r.analytic_success_rate);
    j["std_error"] = rounded(r.std_error);
    j["within_3sigma"] = r.within_3sigma;
    j["verdict"] = r.within_3sigma ? "pass" : "fail";
    Json steps = Json::array();
    for (const auto& s : r.per_step) {
        steps.push_back({
            {"step", s.step},
            {"attempts", s.attempts},
            {"successes", s.successes},
            {"empirical_rate", rounded(s.empirical_rate)},
            {"analytic_rate", rounded(s.analytic_rate)},
            {"std_error", rounded(s.std_error)},
            {"within_3sigma", s.within_3sigma},
        });
    }
    j["per_step"] = steps;
    j["resources"] = {
        {"ghz_consumed", r.ghz_consumed},
        {"bell_measurements", r.bell_measurements},
        {"chains_attempted", r.chains_attempted},
        {"spare_compressed_copies", r.spare_compressed_copies},
        {"ghz_per_completed_chain", n - 1},
        {"bell_per_completed_chain", n - 1},
        {"ledger_consistent", r.ledger_consistent},
    };
    j["bell_outcome_counts"] = {
        {"psi+", r.bell_outcome_counts[0]},
        {"psi-", r.bell_outcome_counts[1]},
        {"phi+", r.bell_outcome_counts[2]},
        {"phi-", r.bell_outcome_counts[3]},
    };
    j["min_clone_fidelity"] = rounded(r.min_clone_fidelity);
    j["reference_success"] = {
        {"tele_cnot", rounded(kTeleCnotProbability)},
        {"three_cnot_d_gate", rounded(kThreeCnotDProbability)},
    };
    return j;
}

Table robustness_table(const ProtocolConfig& config, NoiseKind noise, const std::vector<double>& epsilons,
                       long long trials, std::uint64_t seed, bool* all_contract)
{
    Table t{{"epsilon", "input_T", "output_T", "conditional_output_T", "success_ideal", "success_noisy",
             "success_shift", "empirical_success", "contraction"},
            {}};
    bool ok = true;
    for (double eps : epsilons) {
        const RobustnessReport r = robustness_study(config, noise, eps, trials, seed);
        ok = ok && r.contraction_holds;
        t.rows.push_back({format_number(eps), format_number(r.input_trace_distance),
                          format_number(r.output_trace_distance), format_number(r.conditional_output_trace_distance),
                          format_number(r.success_ideal), format_number(r.success_noisy),
                          format_number(r.success_shift), format_number(r.empirical_success_rate),
                          r.contraction_holds ? "true" : "false"});
    }
    if (all_contract != nullptr) {
        *all_contract = ok;
    }
    return t;
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Probabilistic cloning analytics and remote-cloning protocol simulator", "pqclone"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    // spectrum
    Common spec_common;
    std::string spec_strategy;
    double spec_theta = 0.0;
    std::optional<int> spec_copies;
    std::optional<int> spec_goal;
    auto* spec = app.add_subcommand("spectrum", "Probability spectrum P(x) of a cloning strategy");
    add_common(spec, spec_common);
    spec->add_option("--strategy", spec_strategy, "Strategy, e.g. 2x(1->3),1x(2->3)")->required();
    spec->add_option("--theta", spec_theta, "State-pair angle")->required();
    spec->add_option("--copies", spec_copies, "Declared number of input copies M");
    spec->add_option("--goal", spec_goal, "Copy goal K for the failure probability");

    // curves
    Common curve_common;
    std::string curve_mode = "expectation";
    std::vector<std::string> curve_strategies;
    std::string curve_grid;
    std::optional<int> curve_goal;
    auto* curves = app.add_subcommand("curves", "Expected copies or failure probability over a theta grid");
    add_common(curves, curve_common);
    curves->add_option("--mode", curve_mode, "expectation or failure")
        ->check(CLI::IsMember({"expectation", "failure"}))
        ->capture_default_str();
    curves->add_option("--strategy", curve_strategies, "Strategy (repeatable)");
    curves->add_option("--grid", curve_grid, "lo:hi:count (default 0.001:pi/4:200)");
    curves->add_option("--goal", curve_goal, "Copy goal for failure mode");

    // teleclone
    Common tele_common;
    tele_common.format = "json";
    ProtocolConfig tele;
    tele.copies = 1;
    tele.targets = 2;
    long long tele_trials = 100000;
    std::string tele_prep = "ideal";
    std::string tele_detector = "interferometric";
    std::string tele_sign = "plus";
    std::string tele_completion = "gram_schmidt";
    unsigned tele_threads = 0;
    auto* telecmd = app.add_subcommand("teleclone", "Monte Carlo run of the remote cloning protocol");
    add_common(telecmd, tele_common);
    telecmd->add_option("--copies,-M", tele.copies, "Input copies M")->capture_default_str();
    telecmd->add_option("--targets,-N", tele.targets, "Clones N")->capture_default_str();
    telecmd->add_option("--theta", tele.theta, "State-pair angle")->required();
    telecmd->add_option("--prep", tele_prep)->check(CLI::IsMember({"ideal", "ghz"}))->capture_default_str();
    telecmd->add_option("--detector", tele_detector)
        ->check(CLI::IsMember({"full", "interferometric"}))
        ->capture_default_str();
    telecmd->add_option("--sign", tele_sign, "Secret sign of the input")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    telecmd->add_option("--completion", tele_completion)
        ->check(CLI::IsMember({"gram_schmidt", "alternate"}))
        ->capture_default_str();
    telecmd->add_option("--trials", tele_trials)->capture_default_str();
    telecmd->add_option("--threads", tele_threads, "Worker threads (0 = all cores)");

    // robustness
    Common rob_common;
    ProtocolConfig rob;
    rob.copies = 1;
    rob.targets = 2;
    std::string rob_noise = "depolarizing";
    std::vector<double> rob_eps{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    long long rob_trials = 10000;
    std::string rob_sign = "plus";
    auto* robcmd = app.add_subcommand("robustness", "Trace-distance study of a noisy GHZ resource");
    add_common(robcmd, rob_common);
    robcmd->add_option("--noise", rob_noise)
        ->check(CLI::IsMember({"depolarizing", "dephasing"}))
        ->capture_default_str();
    robcmd->add_option("--epsilon", rob_eps, "Noise strengths, comma separated")->delimiter(',');
    robcmd->add_option("--copies,-M", rob.copies)->capture_default_str();
    robcmd->add_option("--targets,-N", rob.targets)->capture_default_str();
    robcmd->add_option("--theta", rob.theta)->required();
    robcmd->add_option("--trials", rob_trials)->capture_default_str();
    robcmd->add_option("--sign", rob_sign)->check(CLI::IsMember({"plus", "minus"}))->capture_default_str();

    // verify
    Common ver_common;
    ver_common.format = "text";
    std::string ver_filter;
    std::string ver_fault = "none";
    auto* vercmd = app.add_subcommand("verify", "Run the invariant suite");
    vercmd->add_option("--seed", ver_common.seed)->capture_default_str();
    vercmd->add_option("--out", ver_common.out);
    vercmd->add_option("--format", ver_common.format)
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    vercmd->add_option("--filter", ver_filter, "Run only checks whose name contains this text");
    vercmd->add_option("--inject-fault", ver_fault, "Deliberate bug for mutation testing")
        ->check(CLI::IsMember({"none", "omega-sign"}))
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (spec->parsed()) {
            const Common& c = spec_common;
            const double theta = snap_theta(to_radians(spec_theta, c.degrees));
            const Strategy strategy = Strategy::parse(spec_strategy);
            if (spec_copies) {
                strategy.require_input_copies(*spec_copies);
            }
            const int goal = spec_goal.value_or(strategy.largest_target());
            const ProbabilitySpectrum pmf = spectrum(strategy, theta);
            Json params{{"strategy", strategy.to_string()}, {"theta", rounded(theta)}, {"goal", goal}};
            if (spec_copies) {
                params["copies"] = *spec_copies;
            }
            Json summary;
            summary["strategy"] = strategy.to_string();
            summary["theta"] = rounded(theta);
            summary["expected_copies"] = rounded(expected_copies(pmf));
            summary["goal"] = goal;
            summary["failure_probability"] = rounded(failure_probability(pmf, goal));
            const Table t = spectrum_table(strategy, theta);
            if (c.format == "json") {
                Json doc = summary;
                doc["spectrum"] = t.to_json();
                emit(doc.dump(2) + "\n", c, "spectrum", params, out);
            } else {
                emit(t.to_csv(), c, "spectrum", params, out);
                if (!c.out.empty()) {
                    write_file(c.out + ".json", summary.dump(2) + "\n");
                }
            }
            return kExitOk;
        }

        if (curves->parsed()) {
            const Common& c = curve_common;
            std::vector<Strategy> strategies;
            for (const auto& s : curve_strategies) {
                strategies.push_back(Strategy::parse(s));
            }
            if (strategies.empty()) {
                strategies = default_curve_strategies();
            }
            const ThetaGrid grid = curve_grid.empty() ? ThetaGrid{} : ThetaGrid::parse(curve_grid, c.degrees);
            const CurveMode mode = curve_mode == "failure" ? CurveMode::failure : CurveMode::expectation;
            Json names = Json::array();
            for (const auto& s : strategies) {
                names.push_back(s.to_string());
            }
            const auto pts = grid.points();
            Json params{{"mode", curve_mode},
                        {"strategies", names},
                        {"grid", {{"lo", rounded(pts.front())}, {"hi", rounded(pts.back())}, {"count", grid.count}}}};
            if (curve_goal) {
                params["goal"] = *curve_goal;
            }
            emit(render(curves_table(mode, strategies, grid, curve_goal), c), c, "curves", params, out);
            return kExitOk;
        }

        if (telecmd->parsed()) {
            const Common& c = tele_common;
            tele.theta = snap_theta(to_radians(tele.theta, c.degrees));
            tele.prep = tele_prep == "ghz" ? PrepMode::ghz : PrepMode::ideal;
            tele.detector = tele_detector == "full" ? BellDetector::full : BellDetector::interferometric;
            tele.secret_sign = tele_sign == "minus" ? Sign::minus : Sign::plus;
            tele.completion =
                tele_completion == "alternate" ? DGateCompletion::alternate : DGateCompletion::gram_schmidt;
            if (tele.targets > 6) {
                throw UsageError("teleclone supports N <= 6");
            }
            if (tele_trials < 1 || tele_trials > 10'000'000) {
                throw UsageError("trials must lie in [1, 10^7]");
            }
            tele.validate();
            const SessionReport r = simulate(tele, tele_trials, c.seed, tele_threads);
            const Json j = session_report_json(r);
            std::string body;
            if (c.format == "json") {
                body = j.dump(2) + "\n";
            } else {
                Table t{{"metric", "value"}, {}};
                const Json flat = j.flatten();
                for (auto it = flat.begin(); it != flat.end(); ++it) {
                    const Json& v = it.value();
                    t.rows.push_back({it.key(), v.is_string() ? v.get<std::string>() : v.dump()});
                }
                body = t.to_csv();
            }
            Json params{{"copies", tele.copies},          {"targets", tele.targets},
                        {"theta", rounded(tele.theta)},   {"prep", tele_prep},
                        {"detector", tele_detector},      {"sign", tele_sign},
                        {"completion", tele_completion},  {"trials", tele_trials}};
            emit(body, c, "teleclone", params, out);
            const bool fidelity_ok = r.min_clone_fidelity >= 1 - 1e-9;
            if (!r.ledger_consistent || !fidelity_ok) {
                err << "invariant failure: ledger_consistent=" << r.ledger_consistent
                    << " min_clone_fidelity=" << format_number(r.min_clone_fidelity) << "\n";
                return kExitInvariant;
            }
            return kExitOk;
        }

        if (robcmd->parsed()) {
            const Common& c = rob_common;
            rob.theta = snap_theta(to_radians(rob.theta, c.degrees));
            rob.secret_sign = rob_sign == "minus" ? Sign::minus : Sign::plus;
            rob.validate();
            if (rob_trials < 0 || rob_trials > 10'000'000) {
                throw UsageError("trials must lie in [0, 10^7]");
            }
            for (double e : rob_eps) {
                if (!(e >= 0.0 && e <= 1.0)) {
                    throw UsageError("epsilon values must lie in [0, 1]");
                }
            }
            const NoiseKind kind = rob_noise == "dephasing" ? NoiseKind::dephasing : NoiseKind::depolarizing;
            bool contract = true;
            const Table t = robustness_table(rob, kind, rob_eps, rob_trials, c.seed, &contract);
            Json eps = Json::array();
            for (double e : rob_eps) {
                eps.push_back(rounded(e));
            }
            Json params{{"noise", rob_noise},         {"epsilon", eps},
                        {"copies", rob.copies},       {"targets", rob.targets},
                        {"theta", rounded(rob.theta)}, {"trials", rob_trials},
                        {"sign", rob_sign}};
            emit(render(t, c), c, "robustness", params, out);
            if (!contract) {
                err << "invariant failure: trace distance grew through the protocol\n";
                return kExitInvariant;
            }
            return kExitOk;
        }

        if (vercmd->parsed()) {
            const Common& c = ver_common;
            VerifyOptions options;
            options.filter = ver_filter;
            options.seed = c.seed;
            options.fault = ver_fault == "omega-sign" ? InjectedFault::omega_sign : InjectedFault::none;
            const auto results = run_verify(options);
            if (results.empty()) {
                throw UsageError("no check matches filter '" + ver_filter + "'");
            }
            int failed = 0;
            std::string body;
            Json arr = Json::array();
            for (const auto& r : results) {
                failed += r.passed ? 0 : 1;
                body += std::string(r.passed ? "PASS " : "FAIL ") + r.name + "  (" + r.detail + ")\n";
                arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
            }
            body += std::to_string(results.size() - static_cast<std::size_t>(failed)) + "/" +
                    std::to_string(results.size()) + " checks passed\n";
            Json params{{"filter", ver_filter}, {"inject_fault", ver_fault}};
            emit(c.format == "json" ? arr.dump(2) + "\n" : body, c, "verify", params, out);
            return failed == 0 ? kExitOk : kExitInvariant;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace pqclone::cli
