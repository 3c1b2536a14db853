#include "fuzzydyn/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fuzzydyn/comparison.hpp"
#include "fuzzydyn/io_csv.hpp"
#include "fuzzydyn/io_json.hpp"

namespace fuzzydyn {

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T3_1: return "3.1";
    case TheoremId::T3_2: return "3.2";
    case TheoremId::T3_3: return "3.3";
    case TheoremId::T3_4: return "3.4";
    case TheoremId::T3_5: return "3.5";
  }
  return "?";
}

std::optional<TheoremId> theorem_from_string(const std::string& s) {
  if (s == "3.1") return TheoremId::T3_1;
  if (s == "3.2") return TheoremId::T3_2;
  if (s == "3.3") return TheoremId::T3_3;
  if (s == "3.4") return TheoremId::T3_4;
  if (s == "3.5") return TheoremId::T3_5;
  return std::nullopt;
}

std::string to_string(StabilityClaim claim) {
  switch (claim) {
    case StabilityClaim::None: return "None";
    case StabilityClaim::Stable: return "Stable";
    case StabilityClaim::UniformlyStable: return "UniformlyStable";
    case StabilityClaim::AsymptoticallyStable: return "AsymptoticallyStable";
    case StabilityClaim::UniformlyAsymptoticallyStable: return "UniformlyAsymptoticallyStable";
    case StabilityClaim::UniformlyExponentiallyStable: return "UniformlyExponentiallyStable";
  }
  return "?";
}

std::string to_string(ScalarZeroClass c) {
  switch (c) {
    case ScalarZeroClass::ZeroStable: return "ZeroStable";
    case ScalarZeroClass::ZeroUniformlyStable: return "ZeroUniformlyStable";
    case ScalarZeroClass::ZeroAsymptoticallyStable: return "ZeroAsymptoticallyStable";
    case ScalarZeroClass::ZeroUniformlyAsymptoticallyStable:
      return "ZeroUniformlyAsymptoticallyStable";
    case ScalarZeroClass::Inconclusive: return "Inconclusive";
    case ScalarZeroClass::Falsified: return "Falsified";
  }
  return "?";
}

double BetaParams::operator()(double h) const {
  return std::pow((Lambda * std::pow(h, q) + K / delta1) / lambda, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Sampling plans
// ---------------------------------------------------------------------------

std::vector<FuzzyBox> unit_probe_shapes(const LevelGrid& grid, std::size_t dim,
                                        SamplingPlan::Shapes shapes) {
  std::vector<FuzzyBox> out;
  const auto add_unique = [&out](FuzzyBox box) {
    for (const auto& existing : out)
      if (existing == box) return;
    out.push_back(std::move(box));
  };

  add_unique(FuzzyBox::crisp(grid, std::vector<double>(dim, 1.0)));
  add_unique(FuzzyBox::crisp(grid, std::vector<double>(dim, -1.0)));

  if (shapes == SamplingPlan::Shapes::CrispOnly) {
    std::vector<double> first(dim, 0.0);
    first[0] = 1.0;
    add_unique(FuzzyBox::crisp(grid, first));
    first[0] = -1.0;
    add_unique(FuzzyBox::crisp(grid, first));
    std::vector<double> alternating(dim);
    for (std::size_t i = 0; i < dim; ++i) alternating[i] = (i % 2 == 0) ? 1.0 : -1.0;
    add_unique(FuzzyBox::crisp(grid, std::move(alternating)));
    return out;
  }

  const auto box_per_level = [&](auto&& lo_of_alpha, auto&& hi_of_alpha) {
    std::vector<Box> cuts;
    cuts.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double a = grid.alpha(j);
      cuts.emplace_back(std::vector<double>(dim, lo_of_alpha(a)),
                        std::vector<double>(dim, hi_of_alpha(a)));
    }
    return FuzzyBox(grid, std::move(cuts));
  };
  // Symmetric box, constant across levels.
  add_unique(box_per_level([](double) { return -1.0; }, [](double) { return 1.0; }));
  // Symmetric, shrinking toward the core.
  add_unique(box_per_level([](double a) { return -(1.0 - 0.5 * a); },
                           [](double a) { return 1.0 - 0.5 * a; }));
  // One-sided fuzzy: crisp outer reach, rising lower endpoint.
  add_unique(box_per_level([](double a) { return 0.5 * a; }, [](double) { return 1.0; }));
  return out;
}

SamplingPlan SamplingPlan::make_default(const LevelGrid& grid, std::size_t dim,
                                        double rho, Shapes shapes) {
  if (!(rho > 0.0)) throw std::invalid_argument("SamplingPlan: rho must be positive");
  SamplingPlan plan;
  plan.shapes = shapes;
  for (int k = 0; k <= 40; ++k) plan.t_grid.push_back(0.5 * k);
  const auto base_shapes = unit_probe_shapes(grid, dim, shapes);
  for (int r = 1; r <= 8; ++r) {
    const double radius = rho * 0.1 * r;
    for (const auto& shape : base_shapes) plan.x_grid.push_back(scale(radius, shape));
  }
  for (double eps : {0.1, 0.2, 0.5, 1.0, 2.0})
    if (eps < rho) plan.eps_list.push_back(eps);
  return plan;
}

// ---------------------------------------------------------------------------
// V evaluation and the Dini surrogate
// ---------------------------------------------------------------------------

double eval_V(const LyapunovSpec& spec, double t, const FuzzyBox& x) {
  const double d = sup_metric_to_zero(x);
  if (!(d < spec.rho))
    throw std::domain_error("eval_V: state outside S(rho)");
  if (const auto* mp = std::get_if<MetricPowerV>(&spec.V))
    return mp->c * std::pow(d, mp->r);
  const auto& wm = std::get<WeightedMetricV>(spec.V);
  return wm.phi.eval_or_throw(t, 0.0) * std::pow(d, wm.r);
}

FuzzyBox rhs_value(const Rhs& rhs, double t, const FuzzyBox& x) {
  if (const auto* linear = std::get_if<LinearScalarRhs>(&rhs))
    return scale(linear->a.eval_or_throw(t, 0.0), x);
  const auto& field = std::get<EndpointFieldRhs>(rhs);
  if (field.flo.size() != x.dim())
    throw std::invalid_argument("rhs_value: endpoint field arity != dimension");
  std::vector<Box> cuts;
  cuts.reserve(x.levels());
  for (std::size_t j = 0; j < x.levels(); ++j) {
    std::vector<double> lo(x.dim()), hi(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      lo[i] = field.flo[i](t, x.cut(j).lo(i), x.cut(j).hi(i));
      hi[i] = field.fhi[i](t, x.cut(j).lo(i), x.cut(j).hi(i));
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
        throw std::invalid_argument("rhs_value: endpoint field returned non-finite value");
      if (hi[i] < lo[i])
        throw std::invalid_argument(
            "rhs_value: endpoint field image is not a box (hi < lo)");
    }
    cuts.emplace_back(std::move(lo), std::move(hi));
  }
  auto value = FuzzyBox::try_from_cuts(x.grid(), std::move(cuts), 1e-9);
  if (!value)
    throw std::invalid_argument("rhs_value: endpoint field image is not nested");
  return *value;
}

double dini_upper(const LyapunovSpec& spec, const Rhs& rhs, double t, const FuzzyBox& x,
                  const HSchedule& sched) {
  if (sched.steps.size() < 2)
    throw std::invalid_argument("dini_upper: schedule needs at least two steps");
  const FuzzyBox f = rhs_value(rhs, t, x);
  const double v0 = eval_V(spec, t, x);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = sched.steps.size() - 2; k < sched.steps.size(); ++k) {
    const double h = sched.steps[k];
    const FuzzyBox shifted = add(x, scale(h, f));
    worst = std::max(worst, (eval_V(spec, t + h, shifted) - v0) / h);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Scalar probe: the comparison equation's zero solution
// ---------------------------------------------------------------------------

namespace {

constexpr double kProbeHorizon = 50.0;
constexpr double kProbeDt = 0.01;

struct LinearCoefficient {
  ScalarFn g;
  double operator()(double t) const { return g.eval_or_throw(t, 1.0); }
};

// Numeric identification of g(t, w) == a(t) * w on a sample lattice.
bool is_linear_in_w(const ScalarFn& g) {
  static const double t_samples[] = {0.0, 0.1, 0.5, 1.0, 2.0, 3.7, 5.0,
                                     10.0, 17.3, 25.0, 40.0, 50.0, 75.0, 100.0};
  static const double w_samples[] = {-3.0, -0.7, 0.5, 2.0, 7.0};
  for (double t : t_samples) {
    const auto a = g.eval(t, 1.0);
    if (!a) return false;
    for (double w : w_samples) {
      const auto v = g.eval(t, w);
      if (!v) return false;
      const double expect = a.value() * w;
      if (std::abs(v.value() - expect) > 1e-12 * std::max(1.0, std::abs(expect)))
        return false;
    }
  }
  return true;
}

enum class CoefficientForm { Constant, ReciprocalQuadratic, ExpDecay, NonPositive, Unrecognized };

struct CoefficientShape {
  CoefficientForm form = CoefficientForm::Unrecognized;
  double c = 0.0;  // Constant value / numerator / exp amplitude
  double k = 0.0;  // exp rate
};

CoefficientShape classify_coefficient(const LinearCoefficient& a) {
  std::vector<double> ts;
  for (int i = 0; i <= 64; ++i) ts.push_back(100.0 * i / 64.0);

  const auto matches = [&](auto&& model) {
    for (double t : ts) {
      const double got = a(t);
      const double want = model(t);
      if (std::abs(got - want) > 1e-10 * std::max(1.0, std::abs(want))) return false;
    }
    return true;
  };

  CoefficientShape shape;
  const double a0 = a(0.0);
  if (matches([&](double) { return a0; })) {
    shape.form = CoefficientForm::Constant;
    shape.c = a0;
    return shape;
  }
  const double rq = a0;  // c/(1+t^2) has value c at t = 0
  if (rq >= 0.0 && matches([&](double t) { return rq / (1.0 + t * t); })) {
    shape.form = CoefficientForm::ReciprocalQuadratic;
    shape.c = rq;
    return shape;
  }
  if (a0 > 0.0 && a(1.0) > 0.0 && a(1.0) < a0) {
    const double k = std::log(a0 / a(1.0));
    if (k > 0.0 && matches([&](double t) { return a0 * std::exp(-k * t); })) {
      shape.form = CoefficientForm::ExpDecay;
      shape.c = a0;
      shape.k = k;
      return shape;
    }
  }
  bool nonpositive = true;
  for (double t : ts) nonpositive = nonpositive && a(t) <= 0.0;
  for (double t : {1e3, 1e4, 1e6}) nonpositive = nonpositive && a(t) <= 0.0;
  if (nonpositive) {
    shape.form = CoefficientForm::NonPositive;
    return shape;
  }
  return shape;
}

// Integral of the positive part of the recognized coefficient past `from`.
std::optional<double> positive_tail_integral(const CoefficientShape& shape, double from) {
  switch (shape.form) {
    case CoefficientForm::Constant:
      if (shape.c <= 0.0) return 0.0;
      return std::nullopt;  // diverges
    case CoefficientForm::ReciprocalQuadratic:
      return shape.c * (std::numbers::pi / 2.0 - std::atan(from));
    case CoefficientForm::ExpDecay:
      return (shape.c / shape.k) * std::exp(-shape.k * from);
    case CoefficientForm::NonPositive:
      return 0.0;
    case CoefficientForm::Unrecognized:
      return std::nullopt;
  }
  return std::nullopt;
}

double positive_part_quadrature(const LinearCoefficient& a, double from, double to,
                                std::size_t n = 5000) {
  n += n % 2;
  const double h = (to - from) / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = from + h * static_cast<double>(i);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * std::max(a(t), 0.0);
  }
  return acc * h / 3.0;
}

double signed_quadrature(const LinearCoefficient& a, double from, double to,
                         std::size_t n = 5000) {
  n += n % 2;
  const double h = (to - from) / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = from + h * static_cast<double>(i);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * a(t);
  }
  return acc * h / 3.0;
}

// First exit of the maximal-solution estimate from the tube |w| < tube.
std::optional<Counterexample> escape_scan(const ScalarFn& g, double t0, double w0,
                                          double tube, double horizon) {
  ScalarIvp ivp{g, t0, w0, horizon, kProbeDt};
  auto run = maximal_solution(ivp, 2);
  if (!run) {
    if (run.error().kind == SolveError::Kind::Blowup) {
      Counterexample cx;
      cx.hypothesis = "scalar zero solution";
      cx.t = run.error().t;
      cx.x_json = "-";
      cx.margin = -1e12;
      cx.detail = "trajectory from (t0=" + format_double(t0) + ", w0=" + format_double(w0) +
                  ") blew up";
      return cx;
    }
    return std::nullopt;
  }
  const auto& traj = run.value();
  for (std::size_t i = 0; i < traj.times().size(); ++i) {
    if (std::abs(traj.values()[i]) >= tube) {
      Counterexample cx;
      cx.hypothesis = "scalar zero solution";
      cx.t = traj.times()[i];
      cx.x_json = "-";
      cx.margin = tube - std::abs(traj.values()[i]);
      cx.detail = "trajectory from (t0=" + format_double(t0) + ", w0=" + format_double(w0) +
                  ") reached |w|=" + format_double(std::abs(traj.values()[i])) +
                  " >= " + format_double(tube);
      return cx;
    }
  }
  return std::nullopt;
}

// Empirical stability modulus: largest w0 (within 1e-3 relative) whose
// maximal solution stays inside |w| < tube up to the horizon.
double empirical_delta0(const ScalarFn& g, double tube, const std::vector<double>& t0_list,
                        double horizon) {
  const auto stays_inside = [&](double w0) {
    for (double t0 : t0_list) {
      ScalarIvp ivp{g, t0, w0, t0 + horizon, kProbeDt};
      auto run = maximal_solution(ivp, 3);
      if (!run) return false;
      for (double v : run.value().values())
        if (std::abs(v) >= tube) return false;
    }
    return true;
  };
  if (stays_inside(tube)) return tube;
  double lo = 0.0, hi = tube;
  while (hi - lo > 1e-3 * hi && hi > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (stays_inside(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

ScalarProbeReport probe_linear(const ScalarFn& g, const LinearCoefficient& a) {
  ScalarProbeReport report;
  report.linear = true;
  const CoefficientShape shape = classify_coefficient(a);

  if (shape.form == CoefficientForm::Constant) {
    report.method = "linear coefficient, constant";
    if (shape.c > 0.0) {
      report.classification = ScalarZeroClass::Falsified;
      report.escape = escape_scan(g, 0.0, 1e-6, 1.0, kProbeHorizon);
      return report;
    }
    report.amplification = 1.0;
    report.classification = shape.c < 0.0
                                ? ScalarZeroClass::ZeroUniformlyAsymptoticallyStable
                                : ScalarZeroClass::ZeroUniformlyStable;
    return report;
  }

  const auto tail = positive_tail_integral(shape, kProbeHorizon);
  if (tail) {
    report.method = "linear coefficient, integrable positive part";
    const double body = positive_part_quadrature(a, 0.0, kProbeHorizon);
    report.amplification = std::exp(body + *tail);
    // Decaying total integral upgrades the claim to (non-uniform) attraction.
    const double half = signed_quadrature(a, 0.0, kProbeHorizon / 2.0);
    const double full = signed_quadrature(a, 0.0, kProbeHorizon);
    if (shape.form == CoefficientForm::NonPositive && full < -30.0 && full <= half - 1.0)
      report.classification = ScalarZeroClass::ZeroAsymptoticallyStable;
    else
      report.classification = ScalarZeroClass::ZeroUniformlyStable;
    return report;
  }

  // Positive part looks divergent. Try to witness an actual escape.
  report.method = "linear coefficient, positive part not integrable";
  report.escape = escape_scan(g, 0.0, 1e-6, 1.0, kProbeHorizon);
  report.classification =
      report.escape ? ScalarZeroClass::Falsified : ScalarZeroClass::Inconclusive;
  return report;
}

ScalarProbeReport probe_empirical(const ScalarFn& g) {
  ScalarProbeReport report;
  report.method = "empirical maximal-solution probing";
  const std::vector<double> t0_list = {0.0, 5.0, 20.0};
  const std::vector<double> tubes = {1.0, 0.1, 0.01};

  bool uniform = true;
  bool attracts = true;
  for (double tube : tubes) {
    double d_min = std::numeric_limits<double>::infinity();
    double d_max = 0.0;
    for (double t0 : t0_list) {
      const double d0 = empirical_delta0(g, tube, {t0}, kProbeHorizon);
      if (d0 <= tube * 1e-6) {
        if (auto escape = escape_scan(g, t0, tube * 1e-6, tube, kProbeHorizon)) {
          report.classification = ScalarZeroClass::Falsified;
          report.escape = escape;
          return report;
        }
        report.classification = ScalarZeroClass::Inconclusive;
        return report;
      }
      d_min = std::min(d_min, d0);
      d_max = std::max(d_max, d0);
      ScalarIvp decay_probe{g, t0, 0.5 * d0, t0 + kProbeHorizon, kProbeDt};
      if (auto run = maximal_solution(decay_probe, 3); run.ok()) {
        const double tail_value = std::abs(run.value().values().back());
        attracts = attracts && tail_value <= std::max(1e-3 * 0.5 * d0, 1e-12);
      } else {
        attracts = false;
      }
    }
    uniform = uniform && (d_min >= 0.5 * d_max);
  }
  if (uniform && attracts)
    report.classification = ScalarZeroClass::ZeroUniformlyAsymptoticallyStable;
  else if (attracts)
    report.classification = ScalarZeroClass::ZeroAsymptoticallyStable;
  else if (uniform)
    report.classification = ScalarZeroClass::ZeroUniformlyStable;
  else
    report.classification = ScalarZeroClass::ZeroStable;
  return report;
}

}  // namespace

ScalarProbeReport scalar_stability_probe(const ScalarFn& g, const SamplingPlan& plan) {
  for (double t : plan.t_grid) {
    const auto v = g.eval(t, 0.0);
    if (!v || std::abs(v.value()) > 1e-12)
      throw std::invalid_argument("scalar_stability_probe: g(t, 0) must vanish");
  }
  if (is_linear_in_w(g)) return probe_linear(g, LinearCoefficient{g});
  return probe_empirical(g);
}

std::optional<double> linear_tail_amplification(const Rhs& rhs, double from) {
  const auto* linear = std::get_if<LinearScalarRhs>(&rhs);
  if (linear == nullptr) return std::nullopt;
  const LinearCoefficient a{linear->a};
  const CoefficientShape shape = classify_coefficient(a);
  const auto tail = positive_tail_integral(shape, from);
  if (!tail) return std::nullopt;
  return std::exp(*tail);
}

// ---------------------------------------------------------------------------
// Hypothesis checking
// ---------------------------------------------------------------------------

namespace {

struct Checker {
  const LyapunovSpec& spec;
  const Rhs& rhs;
  const SamplingPlan& plan;
  StabilityCertificate cert;

  [[nodiscard]] bool failed() const { return cert.counterexample.has_value(); }

  void fail(std::string hypothesis, double t, const FuzzyBox* x, double margin,
            std::string detail) {
    if (failed()) return;
    Counterexample cx;
    cx.hypothesis = std::move(hypothesis);
    cx.t = t;
    cx.x_json = x ? fuzzybox_to_json_string(*x) : "-";
    cx.margin = margin;
    cx.detail = std::move(detail);
    cert.counterexample = std::move(cx);
  }

  /// Scans the (t, x) lattice. `margin_fn` returns (raw margin, slack);
  /// negative raw margin beyond the slack falsifies the hypothesis.
  template <typename MarginFn>
  void scan_grid(const std::string& name, MarginFn&& margin_fn) {
    if (failed()) return;
    HypothesisMargin row{name, std::numeric_limits<double>::infinity(), 0.0, 0.0, "-", true};
    const FuzzyBox* worst_x = nullptr;
    for (double t : plan.t_grid) {
      for (const auto& x : plan.x_grid) {
        double margin = 0.0;
        double slack = 0.0;
        try {
          std::tie(margin, slack) = margin_fn(t, x);
        } catch (const std::domain_error&) {
          continue;  // shifted state left S(rho); point not evaluable
        } catch (const ExprEvalException& e) {
          fail(name, t, &x, 0.0, std::string("evaluation failed: ") + e.what());
          return;
        } catch (const std::invalid_argument& e) {
          fail(name, t, &x, 0.0, e.what());
          return;
        }
        if (margin < row.min_margin) {
          row.min_margin = margin;
          row.slack = slack;
          row.at_t = t;
          worst_x = &x;
        }
        if (margin < -slack) {
          row.pass = false;
          row.at_t = t;
          row.min_margin = margin;
          row.slack = slack;
          worst_x = &x;
          if (worst_x) row.at_x = fuzzybox_to_json_string(*worst_x);
          cert.evidence.push_back(row);
          fail(name, t, &x, margin, "grid point violates the hypothesis");
          return;
        }
      }
    }
    if (worst_x) row.at_x = fuzzybox_to_json_string(*worst_x);
    cert.evidence.push_back(row);
  }

  /// Scans pairs of plan states for the Lipschitz hypothesis.
  void scan_lipschitz() {
    if (failed()) return;
    const std::string name = "lipschitz";
    HypothesisMargin row{name, std::numeric_limits<double>::infinity(), 1e-9, 0.0, "-", true};
    const FuzzyBox* worst_x = nullptr;
    for (double t : plan.t_grid) {
      try {
        const double lt = spec.L.eval_or_throw(t, 0.0);
        for (std::size_t ia = 0; ia < plan.x_grid.size(); ++ia) {
          const double va = eval_V(spec, t, plan.x_grid[ia]);
          for (std::size_t ib = ia + 1; ib < plan.x_grid.size(); ++ib) {
            const auto& xb = plan.x_grid[ib];
            const double vb = eval_V(spec, t, xb);
            const double margin =
                lt * sup_metric(plan.x_grid[ia], xb) - std::abs(va - vb);
            if (margin < row.min_margin) {
              row.min_margin = margin;
              row.at_t = t;
              worst_x = &xb;
            }
            if (margin < -row.slack) {
              row.pass = false;
              row.at_x = fuzzybox_to_json_string(xb);
              cert.evidence.push_back(row);
              fail(name, t, &xb, margin, "Lipschitz bound violated on a state pair");
              return;
            }
          }
        }
      } catch (const ExprEvalException& e) {
        fail(name, t, nullptr, 0.0, std::string("evaluation failed: ") + e.what());
        return;
      }
    }
    if (worst_x) row.at_x = fuzzybox_to_json_string(*worst_x);
    cert.evidence.push_back(row);
  }

  void require_class_k(const char* name, const std::optional<ScalarFn>& env) {
    if (failed()) return;
    if (!env) throw std::invalid_argument(std::string("check_theorem: missing envelope ") + name);
    const auto verified = check_class_k(*env, spec.rho);
    if (!verified)
      fail(std::string(name) + " in class K", 0.0, nullptr, 0.0, to_string(verified.error()));
  }

  void check_a0_class_k() {
    if (failed()) return;
    if (!spec.a0_env) throw std::invalid_argument("check_theorem: missing envelope a0");
    for (std::size_t k = 0; k < plan.t_grid.size(); k += 5) {
      const double t = plan.t_grid[k];
      const auto verified = check_class_k_at(*spec.a0_env, t, spec.rho);
      if (!verified) {
        fail("a0(t, .) in class K", t, nullptr, 0.0, to_string(verified.error()));
        return;
      }
    }
  }

  void check_g_vanishes_at_zero() {
    if (failed()) return;
    if (!spec.g) throw std::invalid_argument("check_theorem: missing comparison function g");
    HypothesisMargin row{"g(., 0) = 0", std::numeric_limits<double>::infinity(), 1e-12,
                         0.0, "-", true};
    for (double t : plan.t_grid) {
      const auto v = spec.g->eval(t, 0.0);
      if (!v) {
        fail(row.name, t, nullptr, 0.0, "g(t, 0) evaluation failed");
        return;
      }
      const double margin = -std::abs(v.value());
      if (margin < row.min_margin) {
        row.min_margin = margin;
        row.at_t = t;
      }
      if (margin < -row.slack) {
        row.pass = false;
        cert.evidence.push_back(row);
        fail(row.name, t, nullptr, margin, "comparison function does not fix w = 0");
        return;
      }
    }
    cert.evidence.push_back(row);
  }

  void check_g_monotone() {
    if (failed()) return;
    HypothesisMargin row{"g(t, .) nondecreasing", std::numeric_limits<double>::infinity(),
                         1e-9, 0.0, "-", true};
    try {
      double w_max = 1.0;
      for (double t : plan.t_grid)
        for (const auto& x : plan.x_grid) w_max = std::max(w_max, eval_V(spec, t, x));
      w_max *= 1.5;
      for (std::size_t k = 0; k < plan.t_grid.size(); k += 5) {
        const double t = plan.t_grid[k];
        double prev = spec.g->eval_or_throw(t, 0.0);
        for (int s = 1; s <= 100; ++s) {
          const double w = w_max * s / 100.0;
          const double cur = spec.g->eval_or_throw(t, w);
          const double margin = cur - prev;
          if (margin < row.min_margin) {
            row.min_margin = margin;
            row.at_t = t;
          }
          if (margin < -row.slack) {
            row.pass = false;
            cert.evidence.push_back(row);
            fail(row.name, t, nullptr, margin, "comparison function decreases in w");
            return;
          }
          prev = cur;
        }
      }
    } catch (const ExprEvalException& e) {
      fail(row.name, 0.0, nullptr, 0.0, std::string("evaluation failed: ") + e.what());
      return;
    }
    cert.evidence.push_back(row);
  }

  double dini_slack(double bound) const {
    return 1e-6 + plan.h_sched.finest() * (1.0 + std::abs(bound));
  }

  double vstar_value(double t, const FuzzyBox& x) const {
    const auto& vs = *spec.vstar;
    return vs.phi.eval_or_throw(t, 0.0) * std::pow(sup_metric_to_zero(x), vs.r);
  }
};

ClassK verified_class_k(const ScalarFn& fn, double rho) {
  auto r = check_class_k(fn, rho);
  if (!r) throw std::logic_error("envelope lost class-K verification");
  return r.value();
}

}  // namespace

StabilityCertificate check_theorem(const LyapunovSpec& spec, const Rhs& rhs,
                                   TheoremId which, const SamplingPlan& plan) {
  if (plan.t_grid.empty() || plan.x_grid.empty())
    throw std::invalid_argument("check_theorem: empty sampling plan");
  for (const auto& x : plan.x_grid)
    if (!(sup_metric_to_zero(x) < spec.rho))
      throw std::invalid_argument("check_theorem: plan states must lie inside S(rho)");

  Checker ck{spec, rhs, plan, {}};
  ck.cert.theorem = which;
  ck.cert.plan_t_grid = plan.t_grid;
  ck.cert.plan_x_count = plan.x_grid.size();
  ck.cert.plan_h_sched = plan.h_sched.steps;
  ck.cert.plan_eps_list = plan.eps_list;

  // Hypothesis (i): the Lipschitz modulus.
  ck.scan_lipschitz();

  // Hypothesis (ii): envelope sandwiches and V(t, 0) = 0.
  const FuzzyBox origin = FuzzyBox::zero(plan.x_grid.front().grid(), plan.x_grid.front().dim());
  if (!ck.failed()) {
    ck.scan_grid("V(t, 0) = 0", [&](double t, const FuzzyBox&) {
      return std::pair<double, double>(-std::abs(eval_V(spec, t, origin)), 1e-12);
    });
  }

  const bool needs_lower_env = which != TheoremId::T3_5;
  if (needs_lower_env) {
    ck.require_class_k("a", spec.a_env);
    if (!ck.failed()) {
      const ClassK a = verified_class_k(*spec.a_env, spec.rho);
      ck.scan_grid("a(d) <= V", [&](double t, const FuzzyBox& x) {
        const double d = sup_metric_to_zero(x);
        return std::pair<double, double>(eval_V(spec, t, x) - a(d), 1e-9);
      });
    }
  }
  if (which == TheoremId::T3_2 || which == TheoremId::T3_4) {
    ck.require_class_k("b", spec.b_env);
    if (!ck.failed()) {
      const ClassK b = verified_class_k(*spec.b_env, spec.rho);
      ck.scan_grid("V <= b(d)", [&](double t, const FuzzyBox& x) {
        const double d = sup_metric_to_zero(x);
        return std::pair<double, double>(b(d) - eval_V(spec, t, x), 1e-9);
      });
    }
  }
  if (which == TheoremId::T3_3) {
    ck.check_a0_class_k();
    if (!ck.failed()) {
      const ScalarFn a0 = *spec.a0_env;
      ck.scan_grid("V <= a0(t, d)", [&](double t, const FuzzyBox& x) {
        const double d = sup_metric_to_zero(x);
        return std::pair<double, double>(a0.eval_or_throw(t, d) - eval_V(spec, t, x), 1e-9);
      });
    }
    if (!ck.failed()) {
      if (!spec.f_bound)
        throw std::invalid_argument("check_theorem: 3.3 needs the right-hand side bound");
      const double bound = *spec.f_bound;
      ck.scan_grid("d[f(t,x), 0] <= bound", [&](double t, const FuzzyBox& x) {
        const double norm = sup_metric_to_zero(rhs_value(rhs, t, x));
        return std::pair<double, double>(bound - norm, 1e-9);
      });
    }
  }

  if (which == TheoremId::T3_5) {
    if (!spec.constants)
      throw std::invalid_argument("check_theorem: 3.5 needs the constant block");
    const TheoremConstants& c = *spec.constants;
    for (double v : {c.lambda, c.Lambda, c.gamma, c.K, c.p, c.q, c.delta})
      if (!(v > 0.0))
        throw std::invalid_argument("check_theorem: 3.5 constants must be positive");
    if (!ck.failed()) {
      ck.scan_grid("lambda d^p <= V <= Lambda d^q", [&](double t, const FuzzyBox& x) {
        const double d = sup_metric_to_zero(x);
        const double v = eval_V(spec, t, x);
        const double lower = v - c.lambda * std::pow(d, c.p);
        const double upper = c.Lambda * std::pow(d, c.q) - v;
        return std::pair<double, double>(std::min(lower, upper), 1e-9);
      });
    }
    if (!ck.failed()) {
      ck.scan_grid("D+V <= -gamma d^q + K exp(-delta t)", [&](double t, const FuzzyBox& x) {
        const double d = sup_metric_to_zero(x);
        const double bound = -c.gamma * std::pow(d, c.q) + c.K * std::exp(-c.delta * t);
        const double deriv = dini_upper(spec, rhs, t, x, plan.h_sched);
        return std::pair<double, double>(bound - deriv, ck.dini_slack(bound));
      });
    }
    if (!ck.failed()) {
      const double ratio = c.gamma / c.Lambda;
      HypothesisMargin row{"delta > gamma/Lambda > 0", c.delta - ratio, 0.0, 0.0, "-",
                           c.delta > ratio};
      ck.cert.evidence.push_back(row);
      if (!row.pass) {
        ck.fail(row.name, 0.0, nullptr, row.min_margin,
                "side condition fails: delta = " + format_double(c.delta) +
                    ", gamma/Lambda = " + format_double(ratio));
      }
    }
    if (!ck.failed()) {
      ck.cert.claim = StabilityClaim::UniformlyExponentiallyStable;
      CertificateBounds bounds;
      const double M = c.gamma / c.Lambda;
      bounds.alpha = M / c.p;
      bounds.beta = BetaParams{c.lambda, c.Lambda, c.q, c.p, c.K, c.delta - M};
      ck.cert.bounds = std::move(bounds);
    } else {
      ck.cert.claim = StabilityClaim::None;
    }
    return std::move(ck.cert);
  }

  // Hypothesis (iii): the decay inequality, with V* folded in for 3.3/3.4.
  const bool with_vstar = which == TheoremId::T3_3 || which == TheoremId::T3_4;
  if (with_vstar) {
    if (!spec.vstar) throw std::invalid_argument("check_theorem: missing V*");
    ck.require_class_k("c", spec.c_env);
    if (!ck.failed()) {
      const ClassK c_env = verified_class_k(*spec.c_env, spec.rho);
      ck.scan_grid("V* >= c(d)", [&](double t, const FuzzyBox& x) {
        const double d = sup_metric_to_zero(x);
        return std::pair<double, double>(ck.vstar_value(t, x) - c_env(d), 1e-9);
      });
    }
  }
  ck.check_g_vanishes_at_zero();
  if (with_vstar) ck.check_g_monotone();
  if (!ck.failed()) {
    const ScalarFn g = *spec.g;
    ck.scan_grid(with_vstar ? "D+V + V* <= g(t, V)" : "D+V <= g(t, V)",
                 [&](double t, const FuzzyBox& x) {
                   const double v = eval_V(spec, t, x);
                   const double bound = g.eval_or_throw(t, v);
                   double lhs = dini_upper(spec, rhs, t, x, plan.h_sched);
                   if (with_vstar) lhs += ck.vstar_value(t, x);
                   return std::pair<double, double>(bound - lhs, ck.dini_slack(bound));
                 });
  }

  // Scalar-side input: the zero solution of the comparison equation.
  if (!ck.failed()) {
    auto probe = scalar_stability_probe(*spec.g, plan);
    if (probe.classification == ScalarZeroClass::Falsified) {
      ck.cert.counterexample = probe.escape;
      if (!ck.cert.counterexample) {
        Counterexample cx;
        cx.hypothesis = "scalar zero solution";
        cx.detail = "probe falsified the comparison equation's stability";
        ck.cert.counterexample = std::move(cx);
      }
    }
    ck.cert.scalar_probe = std::move(probe);
  }

  if (!ck.failed()) {
    const auto cls = ck.cert.scalar_probe->classification;
    const bool zs = cls == ScalarZeroClass::ZeroStable ||
                    cls == ScalarZeroClass::ZeroUniformlyStable ||
                    cls == ScalarZeroClass::ZeroAsymptoticallyStable ||
                    cls == ScalarZeroClass::ZeroUniformlyAsymptoticallyStable;
    const bool zus = cls == ScalarZeroClass::ZeroUniformlyStable ||
                     cls == ScalarZeroClass::ZeroUniformlyAsymptoticallyStable;
    const bool zas = cls == ScalarZeroClass::ZeroAsymptoticallyStable ||
                     cls == ScalarZeroClass::ZeroUniformlyAsymptoticallyStable;
    switch (which) {
      case TheoremId::T3_1:
        if (zas) ck.cert.claim = StabilityClaim::AsymptoticallyStable;
        else if (zs) ck.cert.claim = StabilityClaim::Stable;
        else ck.cert.note = "scalar probe inconclusive";
        break;
      case TheoremId::T3_2:
        if (cls == ScalarZeroClass::ZeroUniformlyAsymptoticallyStable)
          ck.cert.claim = StabilityClaim::UniformlyAsymptoticallyStable;
        else if (zus) ck.cert.claim = StabilityClaim::UniformlyStable;
        else ck.cert.note = "scalar uniform stability not established";
        break;
      case TheoremId::T3_3:
        if (zs) ck.cert.claim = StabilityClaim::AsymptoticallyStable;
        else ck.cert.note = "scalar probe inconclusive";
        break;
      case TheoremId::T3_4:
        if (zus) ck.cert.claim = StabilityClaim::UniformlyAsymptoticallyStable;
        else ck.cert.note = "scalar uniform stability not established";
        break;
      case TheoremId::T3_5:
        break;  // handled above
    }
  }

  // Constructed bounds: the epsilon -> delta table (and the settling-time
  // table for 3.4), from delta(eps) = sup { delta : b(delta) < a(delta0(eps)) }.
  if (ck.cert.established() &&
      (which == TheoremId::T3_2 || which == TheoremId::T3_4) && !plan.eps_list.empty()) {
    const ClassK a = verified_class_k(*spec.a_env, spec.rho);
    const ClassK b = verified_class_k(*spec.b_env, spec.rho);
    CertificateBounds bounds;
    for (double eps : plan.eps_list) {
      if (!(eps > 0.0) || !(eps < spec.rho)) continue;
      double delta0 = 0.0;
      if (ck.cert.scalar_probe->amplification)
        delta0 = a(eps) / *ck.cert.scalar_probe->amplification;
      else
        delta0 = empirical_delta0(*spec.g, a(eps), {0.0, 5.0, 20.0}, kProbeHorizon);
      if (!(delta0 > 0.0)) continue;
      const double target = a(std::min(delta0, spec.rho));
      double lo = 0.0, hi = spec.rho * (1.0 - 1e-12);
      if (b(hi) < target) {
        lo = hi;
      } else {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (b(mid) < target)
            lo = mid;
          else
            hi = mid;
        }
      }
      if (lo > 0.0) bounds.delta_table.emplace_back(eps, lo);
    }
    if (which == TheoremId::T3_4) {
      const ClassK c_env = verified_class_k(*spec.c_env, spec.rho);
      for (const auto& [eps, delta] : bounds.delta_table) {
        const double floor = c_env(delta);
        if (floor > 0.0) bounds.t_table.emplace_back(eps, 1.0 + a(spec.rho * (1.0 - 1e-12)) / floor);
      }
    }
    if (!bounds.delta_table.empty()) ck.cert.bounds = std::move(bounds);
  }

  return std::move(ck.cert);
}

}  // namespace fuzzydyn
