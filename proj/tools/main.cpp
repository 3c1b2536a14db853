#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fuzzydyn: level-set fuzzy dynamics, simulation and stability certificates"};
  app.require_subcommand(1);

  fuzzydyn::cli::Overrides overrides;
  std::string scenario_path;
  std::string out_path;
  std::string theorem = "3.2";
  std::string experiment;
  std::string table_path;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--levels", overrides.levels, "resample x0 onto a uniform level grid of this size");
    cmd->add_option("--horizon", overrides.horizon, "override the scenario horizon");
    cmd->add_option("--dt", overrides.dt, "override the base integrator step");
    cmd->add_option("--seed", overrides.seed, "probe shuffling seed (outputs are seed-invariant)");
  };

  auto* simulate = app.add_subcommand("simulate", "solve the scenario and emit a trajectory CSV");
  simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
  simulate->add_option("--out", out_path, "CSV output path (stdout when omitted)");
  add_common(simulate);

  auto* certify = app.add_subcommand("certify", "check a stability criterion and emit a certificate");
  certify->add_option("scenario", scenario_path, "scenario JSON file")->required();
  certify->add_option("--theorem", theorem, "criterion to check: 3.1, 3.2, 3.3, 3.4 or 3.5")->required();
  certify->add_option("--out", out_path, "certificate JSON output path (stdout when omitted)");
  add_common(certify);

  auto* report = app.add_subcommand("report", "run a named experiment and emit its report");
  report->add_option("experiment", experiment, "example-3-1 or crisp-exponential")->required();
  report->add_option("--out", out_path, "report JSON output path");
  report->add_option("--table", table_path, "text table output path");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fuzzydyn::cli::kExitUsage;
  }

  if (simulate->parsed()) return fuzzydyn::cli::cmd_simulate(scenario_path, out_path, overrides);
  if (certify->parsed()) return fuzzydyn::cli::cmd_certify(scenario_path, theorem, out_path, overrides);
  return fuzzydyn::cli::cmd_report(experiment, out_path, table_path, overrides);
}
