#include "scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace fuzzydyn::cli {

namespace {

void reject_unknown_keys(const Json& obj, const std::string& path,
                         const std::set<std::string>& known) {
  for (const auto& [key, _] : obj.items())
    if (!known.contains(key)) throw SchemaError(path + "." + key, "unknown key");
}

double require_number(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw SchemaError(path + "." + key, "missing");
  if (!obj[key].is_number()) throw SchemaError(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

std::string require_string(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw SchemaError(path + "." + key, "missing");
  if (!obj[key].is_string()) throw SchemaError(path + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

ScalarFn parse_expression(const std::string& text, const std::string& path) {
  auto parsed = ScalarFn::parse(text);
  if (!parsed) {
    std::ostringstream os;
    os << "expression parse error at offset " << parsed.error().offset << ": "
       << parsed.error().message;
    throw SchemaError(path, os.str());
  }
  return parsed.value();
}

Rhs load_rhs(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  reject_unknown_keys(j, path, {"kind", "a"});
  const std::string kind = require_string(j, path, "kind");
  if (kind != "linear")
    throw SchemaError(path + ".kind", "unsupported kind '" + kind + "' (expected \"linear\")");
  const std::string a = require_string(j, path, "a");
  ScalarFn fn = parse_expression(a, path + ".a");
  if (fn.references_w())
    throw SchemaError(path + ".a", "linear coefficient must be a function of t only");
  return LinearScalarRhs{std::move(fn)};
}

FuzzyIvp load_ivp(const Json& j, const Overrides& overrides) {
  const std::string path = "ivp";
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  reject_unknown_keys(j, path, {"t0", "horizon", "dt", "rho", "x0", "rhs"});
  const double t0 = require_number(j, path, "t0");
  double horizon = require_number(j, path, "horizon");
  double dt = require_number(j, path, "dt");
  const double rho = require_number(j, path, "rho");
  if (!j.contains("x0")) throw SchemaError(path + ".x0", "missing");
  FuzzyBox x0 = fuzzybox_from_json(j["x0"], path + ".x0");
  if (!j.contains("rhs")) throw SchemaError(path + ".rhs", "missing");
  Rhs rhs = load_rhs(j["rhs"], path + ".rhs");

  if (overrides.levels) x0 = resample(x0, LevelGrid::uniform(*overrides.levels));
  if (overrides.horizon) horizon = *overrides.horizon;
  if (overrides.dt) dt = *overrides.dt;
  return FuzzyIvp{t0, std::move(x0), std::move(rhs), horizon, dt, rho};
}

VFamily load_v_family(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const std::string family = require_string(j, path, "family");
  if (family == "metric_power") {
    reject_unknown_keys(j, path, {"family", "c", "r"});
    const double c = require_number(j, path, "c");
    const double r = require_number(j, path, "r");
    if (!(c > 0.0) || !(r > 0.0)) throw SchemaError(path, "c and r must be positive");
    return MetricPowerV{c, r};
  }
  if (family == "weighted_metric") {
    reject_unknown_keys(j, path, {"family", "phi", "r"});
    ScalarFn phi = parse_expression(require_string(j, path, "phi"), path + ".phi");
    if (phi.references_w())
      throw SchemaError(path + ".phi", "weight must be a function of t only");
    const double r = require_number(j, path, "r");
    if (!(r > 0.0)) throw SchemaError(path + ".r", "must be positive");
    return WeightedMetricV{std::move(phi), r};
  }
  throw SchemaError(path + ".family", "expected \"metric_power\" or \"weighted_metric\"");
}

LyapunovSpec load_lyapunov(const Json& j, double rho) {
  const std::string path = "lyapunov";
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  reject_unknown_keys(j, path, {"V", "L", "a_env", "b_env", "c_env", "a0_env", "g",
                                "Vstar", "constants", "f_bound"});
  if (!j.contains("V")) throw SchemaError(path + ".V", "missing");
  if (!j.contains("L")) throw SchemaError(path + ".L", "missing");

  LyapunovSpec spec{.V = load_v_family(j["V"], path + ".V"),
                    .L = parse_expression(require_string(j, path, "L"), path + ".L"),
                    .rho = rho};
  const auto load_env = [&](const char* key) -> std::optional<ScalarFn> {
    if (!j.contains(key)) return std::nullopt;
    return parse_expression(require_string(j, path, key), path + "." + key);
  };
  spec.a_env = load_env("a_env");
  spec.b_env = load_env("b_env");
  spec.c_env = load_env("c_env");
  spec.a0_env = load_env("a0_env");
  spec.g = load_env("g");
  if (j.contains("Vstar")) {
    const Json& vs = j["Vstar"];
    const std::string vs_path = path + ".Vstar";
    if (!vs.is_object()) throw SchemaError(vs_path, "expected an object");
    reject_unknown_keys(vs, vs_path, {"phi", "r"});
    ScalarFn phi = parse_expression(require_string(vs, vs_path, "phi"), vs_path + ".phi");
    if (phi.references_w())
      throw SchemaError(vs_path + ".phi", "weight must be a function of t only");
    const double r = require_number(vs, vs_path, "r");
    if (!(r > 0.0)) throw SchemaError(vs_path + ".r", "must be positive");
    spec.vstar = WeightedMetricV{std::move(phi), r};
  }
  if (j.contains("constants")) {
    const Json& c = j["constants"];
    const std::string c_path = path + ".constants";
    if (!c.is_object()) throw SchemaError(c_path, "expected an object");
    reject_unknown_keys(c, c_path, {"lambda", "Lambda", "gamma", "K", "p", "q", "delta"});
    spec.constants = TheoremConstants{
        require_number(c, c_path, "lambda"), require_number(c, c_path, "Lambda"),
        require_number(c, c_path, "gamma"),  require_number(c, c_path, "K"),
        require_number(c, c_path, "p"),      require_number(c, c_path, "q"),
        require_number(c, c_path, "delta")};
  }
  if (j.contains("f_bound")) spec.f_bound = require_number(j, path, "f_bound");
  return spec;
}

std::vector<double> load_number_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

}  // namespace

ScenarioFile load_scenario(const Json& doc, const Overrides& overrides) {
  if (!doc.is_object()) throw SchemaError("$", "scenario must be a JSON object");
  reject_unknown_keys(doc, "$", {"ivp", "lyapunov", "run"});
  if (!doc.contains("ivp")) throw SchemaError("ivp", "missing");

  FuzzyIvp ivp = load_ivp(doc["ivp"], overrides);
  ScenarioFile file{std::move(ivp), std::nullopt, std::nullopt, {}, {}};
  if (doc.contains("lyapunov"))
    file.lyapunov = load_lyapunov(doc["lyapunov"], file.ivp.rho);
  if (doc.contains("run")) {
    const Json& run = doc["run"];
    const std::string path = "run";
    if (!run.is_object()) throw SchemaError(path, "expected an object");
    reject_unknown_keys(run, path, {"plan_shapes", "eps_list", "t0_list"});
    if (run.contains("plan_shapes")) {
      const std::string shapes = require_string(run, path, "plan_shapes");
      if (shapes == "crisp")
        file.plan_shapes = SamplingPlan::Shapes::CrispOnly;
      else if (shapes == "mixed")
        file.plan_shapes = SamplingPlan::Shapes::Mixed;
      else
        throw SchemaError(path + ".plan_shapes", "expected \"crisp\" or \"mixed\"");
    }
    if (run.contains("eps_list")) file.eps_list = load_number_list(run["eps_list"], path + ".eps_list");
    if (run.contains("t0_list")) file.t0_list = load_number_list(run["t0_list"], path + ".t0_list");
  }
  return file;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return Json::parse(in);  // throws with byte positions on malformed input
}

}  // namespace fuzzydyn::cli
