#include "fuzzydyn/io_json.hpp"

#include "fuzzydyn/io_csv.hpp"

namespace fuzzydyn {

SchemaError::SchemaError(std::string path_in, const std::string& message)
    : std::runtime_error("schema error at " + path_in + ": " + message),
      path(std::move(path_in)) {}

namespace {

std::vector<double> as_vector(std::span<const double> s) {
  return std::vector<double>(s.begin(), s.end());
}

}  // namespace

Json to_json(const FuzzyBox& box) {
  Json j;
  j["alphas"] = as_vector(box.grid().alphas());
  Json cuts = Json::array();
  for (std::size_t k = 0; k < box.levels(); ++k) {
    Json cut;
    cut["lo"] = as_vector(box.cut(k).lo());
    cut["hi"] = as_vector(box.cut(k).hi());
    cuts.push_back(std::move(cut));
  }
  j["cuts"] = std::move(cuts);
  return j;
}

namespace {

std::vector<double> number_array(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a non-empty array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

}  // namespace

FuzzyBox fuzzybox_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& [key, _] : j.items())
    if (key != "alphas" && key != "cuts") throw SchemaError(path + "." + key, "unknown key");
  if (!j.contains("alphas")) throw SchemaError(path + ".alphas", "missing");
  if (!j.contains("cuts")) throw SchemaError(path + ".cuts", "missing");

  std::vector<double> alphas = number_array(j["alphas"], path + ".alphas");
  const Json& cuts_json = j["cuts"];
  if (!cuts_json.is_array() || cuts_json.size() != alphas.size())
    throw SchemaError(path + ".cuts", "expected one cut per alpha level");
  std::vector<Box> cuts;
  cuts.reserve(cuts_json.size());
  for (std::size_t k = 0; k < cuts_json.size(); ++k) {
    const std::string cut_path = path + ".cuts[" + std::to_string(k) + "]";
    const Json& cut = cuts_json[k];
    if (!cut.is_object()) throw SchemaError(cut_path, "expected an object");
    for (const auto& [key, _] : cut.items())
      if (key != "lo" && key != "hi") throw SchemaError(cut_path + "." + key, "unknown key");
    if (!cut.contains("lo") || !cut.contains("hi"))
      throw SchemaError(cut_path, "needs lo and hi arrays");
    try {
      cuts.emplace_back(number_array(cut["lo"], cut_path + ".lo"),
                        number_array(cut["hi"], cut_path + ".hi"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(cut_path, e.what());
    }
  }
  try {
    return FuzzyBox(LevelGrid(std::move(alphas)), std::move(cuts));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  }
}

std::string fuzzybox_to_json_string(const FuzzyBox& box) { return to_json(box).dump(); }

Json to_json(const StabilityCertificate& cert) {
  Json j;
  j["claim"] = to_string(cert.claim);
  j["theorem"] = to_string(cert.theorem);
  j["established"] = cert.established();
  if (!cert.note.empty()) j["note"] = cert.note;

  Json margins = Json::array();
  for (const auto& row : cert.evidence) {
    Json m;
    m["hypothesis"] = row.name;
    m["min_margin"] = row.min_margin;
    m["slack"] = row.slack;
    m["at_t"] = row.at_t;
    m["at_x"] = row.at_x;
    m["pass"] = row.pass;
    margins.push_back(std::move(m));
  }
  j["margins"] = std::move(margins);

  if (cert.counterexample) {
    Json cx;
    cx["hypothesis"] = cert.counterexample->hypothesis;
    cx["t"] = cert.counterexample->t;
    cx["x"] = cert.counterexample->x_json;
    cx["margin"] = cert.counterexample->margin;
    cx["detail"] = cert.counterexample->detail;
    j["counterexample"] = std::move(cx);
  }

  if (cert.scalar_probe) {
    Json probe;
    probe["classification"] = to_string(cert.scalar_probe->classification);
    probe["linear"] = cert.scalar_probe->linear;
    if (cert.scalar_probe->amplification)
      probe["amplification"] = *cert.scalar_probe->amplification;
    probe["method"] = cert.scalar_probe->method;
    j["scalar_probe"] = std::move(probe);
  }

  if (cert.bounds) {
    Json b;
    if (cert.bounds->alpha) b["alpha"] = *cert.bounds->alpha;
    if (cert.bounds->beta) {
      Json beta;
      beta["lambda"] = cert.bounds->beta->lambda;
      beta["Lambda"] = cert.bounds->beta->Lambda;
      beta["q"] = cert.bounds->beta->q;
      beta["p"] = cert.bounds->beta->p;
      beta["K"] = cert.bounds->beta->K;
      beta["delta1"] = cert.bounds->beta->delta1;
      b["beta"] = std::move(beta);
    }
    if (!cert.bounds->delta_table.empty()) {
      Json table = Json::array();
      for (const auto& [eps, delta] : cert.bounds->delta_table)
        table.push_back(Json{{"eps", eps}, {"delta", delta}});
      b["delta_table"] = std::move(table);
    }
    if (!cert.bounds->t_table.empty()) {
      Json table = Json::array();
      for (const auto& [eps, T] : cert.bounds->t_table)
        table.push_back(Json{{"eps", eps}, {"T", T}});
      b["T_table"] = std::move(table);
    }
    j["bounds"] = std::move(b);
  }

  Json plan;
  plan["t_grid"] = cert.plan_t_grid;
  plan["x_count"] = cert.plan_x_count;
  plan["h_schedule"] = cert.plan_h_sched;
  plan["eps_list"] = cert.plan_eps_list;
  j["plan"] = std::move(plan);
  return j;
}

Json to_json(const EmpiricalReport& report) {
  Json j;
  j["experiment"] = report.name;
  j["horizon"] = report.horizon;
  j["horizon_truncated"] = report.horizon_truncated;
  if (!report.deltas.empty()) {
    Json deltas = Json::array();
    for (const auto& d : report.deltas) {
      Json e;
      e["eps"] = d.eps;
      e["t0"] = d.t0;
      e["delta"] = d.delta;
      e["tail_corrected"] = d.tail_corrected;
      deltas.push_back(std::move(e));
    }
    j["deltas"] = std::move(deltas);
  }
  if (!report.amplifications.empty()) {
    Json amps = Json::array();
    for (const auto& a : report.amplifications)
      amps.push_back(Json{{"t0", a.t0}, {"amplification", a.amplification}});
    j["amplifications"] = std::move(amps);
  }
  if (report.fit) {
    Json fit;
    fit["rate"] = report.fit->rate;
    fit["intercept"] = report.fit->intercept;
    fit["residual"] = report.fit->residual;
    j["decay_fit"] = std::move(fit);
  }
  if (report.certificate) j["certificate"] = to_json(*report.certificate);
  Json flags = Json::array();
  for (const auto& f : report.flags) {
    Json e;
    e["name"] = f.name;
    e["pass"] = f.pass;
    if (!f.detail.empty()) e["detail"] = f.detail;
    flags.push_back(std::move(e));
  }
  j["flags"] = std::move(flags);
  j["all_pass"] = report.all_pass();
  return j;
}

}  // namespace fuzzydyn
