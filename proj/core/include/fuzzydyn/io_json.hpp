#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "fuzzydyn/box.hpp"
#include "fuzzydyn/experiments.hpp"
#include "fuzzydyn/lyapunov.hpp"

namespace fuzzydyn {

/// Insertion-ordered JSON keeps emitted documents byte-stable across runs.
using Json = nlohmann::ordered_json;

/// Raised when a JSON document does not match the expected schema; `path`
/// points at the offending element.
struct SchemaError : std::runtime_error {
  SchemaError(std::string path_in, const std::string& message);
  std::string path;
};

/// {"alphas": [...], "cuts": [{"lo": [...], "hi": [...]}, ...]}
[[nodiscard]] Json to_json(const FuzzyBox& box);
[[nodiscard]] FuzzyBox fuzzybox_from_json(const Json& j, const std::string& path = "x0");
[[nodiscard]] std::string fuzzybox_to_json_string(const FuzzyBox& box);

[[nodiscard]] Json to_json(const StabilityCertificate& cert);
[[nodiscard]] Json to_json(const EmpiricalReport& report);

}  // namespace fuzzydyn
