#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <fuzzydyn/io_csv.hpp>

namespace fuzzydyn::cli {

namespace {

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return kExitUsage;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Json::parse_error& e) {
    return usage_error(e.what());
  } catch (const SchemaError& e) {
    return usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
}

SamplingPlan::Shapes default_shapes_for(TheoremId id) {
  // Decay-type criteria are only satisfiable by crisp probe states: widths
  // never shrink along Hukuhara solutions, so fuzzy probes would falsify
  // every contraction hypothesis.
  switch (id) {
    case TheoremId::T3_1:
    case TheoremId::T3_2:
      return SamplingPlan::Shapes::Mixed;
    default:
      return SamplingPlan::Shapes::CrispOnly;
  }
}

}  // namespace

int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 const Overrides& overrides) {
  return guarded([&] {
    const ScenarioFile file = load_scenario(read_json_file(scenario_path), overrides);
    auto traj = solve(file.ivp);
    if (!traj) {
      std::cerr << "solver error: " << to_string(traj.error()) << '\n';
      return kExitSolver;
    }
    std::ostringstream csv;
    write_csv(traj.value(), csv);
    write_text(out_path, csv.str());
    return kExitOk;
  });
}

int cmd_certify(const std::string& scenario_path, const std::string& theorem,
                const std::string& out_path, const Overrides& overrides) {
  return guarded([&] {
    const auto which = theorem_from_string(theorem);
    if (!which) return usage_error("unknown criterion '" + theorem + "' (expected 3.1..3.5)");
    const ScenarioFile file = load_scenario(read_json_file(scenario_path), overrides);
    if (!file.lyapunov) throw SchemaError("lyapunov", "missing (required by certify)");

    const auto shapes = file.plan_shapes.value_or(default_shapes_for(*which));
    auto plan = SamplingPlan::make_default(file.ivp.x0.grid(), file.ivp.x0.dim(),
                                           file.ivp.rho, shapes);
    if (!file.eps_list.empty()) plan.eps_list = file.eps_list;
    const StabilityCertificate cert =
        check_theorem(*file.lyapunov, file.ivp.rhs, *which, plan);

    write_text(out_path, to_json(cert).dump(2) + "\n");
    if (!cert.established()) {
      std::cerr << "certificate not established"
                << (cert.counterexample ? ": " + cert.counterexample->detail
                                        : (cert.note.empty() ? "" : ": " + cert.note))
                << '\n';
      return kExitFalsified;
    }
    return kExitOk;
  });
}

int cmd_report(const std::string& name, const std::string& out_json,
               const std::string& out_table, const Overrides& overrides) {
  return guarded([&] {
    EmpiricalReport report;
    if (name == "example-3-1") {
      report = run_example_3_1(overrides.seed);
    } else if (name == "crisp-exponential") {
      report = run_crisp_exponential(overrides.seed);
    } else {
      return usage_error("unknown experiment '" + name +
                         "' (expected example-3-1 or crisp-exponential)");
    }
    const std::string table = report_table(report);
    std::cout << table;
    if (!out_json.empty()) write_text(out_json, to_json(report).dump(2) + "\n");
    if (!out_table.empty()) write_text(out_table, table);
    return report.all_pass() ? kExitOk : kExitFalsified;
  });
}

}  // namespace fuzzydyn::cli
