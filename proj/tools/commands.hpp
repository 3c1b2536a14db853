#pragma once

#include <string>

#include "scenario.hpp"

namespace fuzzydyn::cli {

/// Exit codes shared by all commands, stable for scripting:
/// 0 success, 1 usage or schema error, 2 solver error, 3 falsified or
/// unestablished certificate.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitFalsified = 3;

/// Solves the scenario's initial-value problem and writes the trajectory CSV
/// to `out_path` (stdout when empty).
int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 const Overrides& overrides);

/// Checks the requested stability criterion ("3.1".."3.5") and writes the
/// certificate JSON to `out_path` (stdout when empty).
int cmd_certify(const std::string& scenario_path, const std::string& theorem,
                const std::string& out_path, const Overrides& overrides);

/// Runs a named experiment ("example-3-1" or "crisp-exponential"), prints the
/// text table, and optionally writes the report JSON / table to files.
int cmd_report(const std::string& name, const std::string& out_json,
               const std::string& out_table, const Overrides& overrides);

}  // namespace fuzzydyn::cli
