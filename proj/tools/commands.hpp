#pragma once

// Subcommand implementations behind the `pqclone` executable.

#include "pqclone/analytics.hpp"
#include "pqclone/teleclone.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pqclone::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kToolVersion = "0.1.0";

/// Twelve significant digits, shortest form ("%.12g").
std::string format_number(double x);

/// A double that prints with at most twelve significant digits in JSON.
double rounded(double x);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Header plus rows, comma separated, LF endings. Fields containing a
    /// comma or quote are quoted.
    std::string to_csv() const;
    /// Array of objects keyed by the header. Cells that parse as numbers are
    /// emitted as numbers.
    Json to_json() const;
};

struct ThetaGrid {
    double lo = 0.001;
    double hi = 0.0;  // pi/4 when left at 0
    int count = 200;

    std::vector<double> points() const;
    /// "lo:hi:count"; throws std::invalid_argument.
    static ThetaGrid parse(const std::string& spec, bool degrees);
};

enum class CurveMode { expectation, failure };

Table spectrum_table(const Strategy& strategy, double theta);

/// One column per strategy. In failure mode each strategy uses `goal` if set,
/// otherwise its own largest target.
Table curves_table(CurveMode mode, const std::vector<Strategy>& strategies, const ThetaGrid& grid,
                   std::optional<int> goal);

std::vector<Strategy> default_curve_strategies();

Json session_report_json(const SessionReport& report);

Table robustness_table(const ProtocolConfig& config, NoiseKind noise, const std::vector<double>& epsilons,
                       long long trials, std::uint64_t seed, bool* all_contract);

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pqclone::cli
