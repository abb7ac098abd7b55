#pragma once

// Named invariant checks shared by the `verify` subcommand and the tests.

#include <cstdint>
#include <string>
#include <vector>

namespace pqclone {

/// Deliberate bugs that the suite must catch.
enum class InjectedFault {
    none,
    /// Reduction probe rotated by -omega instead of +omega.
    omega_sign,
};

struct VerifyOptions {
    /// Only checks whose name contains this substring run; empty runs all.
    std::string filter;
    InjectedFault fault = InjectedFault::none;
    std::uint64_t seed = 20240101;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<std::string> verify_check_names();

/// Runs the selected checks in a fixed order. Exceptions raised inside a
/// check count as failures.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

}  // namespace pqclone
