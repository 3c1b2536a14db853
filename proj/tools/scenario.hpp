#pragma once

#include <optional>
#include <string>
#include <vector>

#include <fuzzydyn/experiments.hpp>
#include <fuzzydyn/io_json.hpp>
#include <fuzzydyn/ivp.hpp>
#include <fuzzydyn/lyapunov.hpp>

namespace fuzzydyn::cli {

/// Command-line overrides applied on top of a scenario document.
struct Overrides {
  std::optional<std::size_t> levels;  ///< resample x0 onto a uniform grid
  std::optional<double> horizon;
  std::optional<double> dt;
  unsigned seed = 0;
};

/// A validated scenario document. Unknown keys anywhere are rejected.
struct ScenarioFile {
  FuzzyIvp ivp;
  std::optional<LyapunovSpec> lyapunov;
  std::optional<SamplingPlan::Shapes> plan_shapes;
  std::vector<double> eps_list;  ///< empty means defaults
  std::vector<double> t0_list;
};

/// Parses and validates a scenario document. Throws SchemaError on schema
/// violations; expression syntax errors surface as SchemaError with the
/// parser's byte offset in the message.
[[nodiscard]] ScenarioFile load_scenario(const Json& doc, const Overrides& overrides);

/// Reads and parses the file at `path` (throws nlohmann parse_error with
/// byte positions on malformed JSON).
[[nodiscard]] Json read_json_file(const std::string& path);

}  // namespace fuzzydyn::cli
