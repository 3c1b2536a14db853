#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzydyn/box.hpp"
#include "fuzzydyn/calculus.hpp"
#include "fuzzydyn/expr.hpp"
#include "fuzzydyn/ivp.hpp"

namespace fuzzydyn {

/// V(t, x) = c * d[x, 0]^r.
struct MetricPowerV {
  double c;
  double r;
};

/// V(t, x) = phi(t) * d[x, 0]^r with phi a positive weight of t alone.
struct WeightedMetricV {
  ScalarFn phi;
  double r;
};

using VFamily = std::variant<MetricPowerV, WeightedMetricV>;

/// Positive constants for the exponential-stability criterion (3.5):
/// lambda * d^p <= V <= Lambda * d^q and the decay inequality
/// D+V <= -gamma * d^q + K * exp(-delta * t).
struct TheoremConstants {
  double lambda;
  double Lambda;
  double gamma;
  double K;
  double p;
  double q;
  double delta;
};

/// Everything the hypothesis checker may need. Which fields must be present
/// depends on the criterion being checked; see check_theorem.
struct LyapunovSpec {
  VFamily V;
  ScalarFn L;                       ///< Lipschitz modulus L(t) for hypothesis (i)
  std::optional<ScalarFn> a_env;    ///< lower class-K envelope a(.)
  std::optional<ScalarFn> b_env;    ///< upper class-K envelope b(.)
  std::optional<ScalarFn> c_env;    ///< class-K floor c(.) of V*
  std::optional<ScalarFn> a0_env;   ///< upper envelope a0(t, .) (class K in w per t)
  std::optional<ScalarFn> g;        ///< comparison right-hand side g(t, w)
  std::optional<WeightedMetricV> vstar;
  std::optional<TheoremConstants> constants;
  std::optional<double> f_bound;    ///< bound on d[f(t,x), 0] over the domain
  double rho;
};

/// Identifier of a stability criterion, matching the CLI's --theorem values.
enum class TheoremId { T3_1, T3_2, T3_3, T3_4, T3_5 };

[[nodiscard]] std::string to_string(TheoremId id);
[[nodiscard]] std::optional<TheoremId> theorem_from_string(const std::string& s);

enum class StabilityClaim {
  None,
  Stable,
  UniformlyStable,
  AsymptoticallyStable,
  UniformlyAsymptoticallyStable,
  UniformlyExponentiallyStable,
};

[[nodiscard]] std::string to_string(StabilityClaim claim);

/// Finite surrogate of the universally quantified domain R+ x S(rho).
struct SamplingPlan {
  enum class Shapes { Mixed, CrispOnly };

  std::vector<double> t_grid;
  std::vector<FuzzyBox> x_grid;
  HSchedule h_sched = HSchedule::geometric();
  std::vector<double> eps_list;  ///< epsilon values for the delta/T tables
  Shapes shapes = Shapes::Mixed;

  /// Default plan: t in {0, 0.5, ..., 20}; states at 8 radii up to 0.8*rho
  /// with 5 shapes each. Mixed shapes include symmetric and one-sided fuzzy
  /// boxes; CrispOnly restricts to crisp points, which is what decay-type
  /// hypotheses can satisfy (widths never shrink along solutions).
  static SamplingPlan make_default(const LevelGrid& grid, std::size_t dim, double rho,
                                   Shapes shapes = Shapes::Mixed);
};

/// Catalog of probe states at unit distance from the origin; scaled copies
/// populate sampling plans and experiment probes.
[[nodiscard]] std::vector<FuzzyBox> unit_probe_shapes(const LevelGrid& grid,
                                                      std::size_t dim,
                                                      SamplingPlan::Shapes shapes);

struct HypothesisMargin {
  std::string name;
  double min_margin;  ///< most adverse raw margin (>= 0 means satisfied)
  double slack;       ///< tolerance the pass verdict granted
  double at_t;
  std::string at_x;   ///< serialized witness state ("-" when not applicable)
  bool pass;
};

struct Counterexample {
  std::string hypothesis;
  double t = 0.0;
  std::string x_json;  ///< violating state, serialized ("-" when scalar-side)
  double margin = 0.0;
  std::string detail;
};

struct BetaParams {
  double lambda;
  double Lambda;
  double q;
  double p;
  double K;
  double delta1;

  /// beta(h) = ((Lambda * h^q + K/delta1) / lambda)^(1/p).
  [[nodiscard]] double operator()(double h) const;
};

struct CertificateBounds {
  std::optional<double> alpha;       ///< exponential decay rate
  std::optional<BetaParams> beta;    ///< exponential envelope parameters
  std::vector<std::pair<double, double>> delta_table;  ///< eps -> delta(eps)
  std::vector<std::pair<double, double>> t_table;      ///< eps -> T(eps)
};

enum class ScalarZeroClass {
  ZeroStable,
  ZeroUniformlyStable,
  ZeroAsymptoticallyStable,
  ZeroUniformlyAsymptoticallyStable,
  Inconclusive,
  Falsified,
};

[[nodiscard]] std::string to_string(ScalarZeroClass c);

/// Evidence produced while probing the scalar comparison equation's zero
/// solution. `amplification` is the analytic worst-case growth factor when
/// g is recognized as linear in w with an integrable positive part.
struct ScalarProbeReport {
  ScalarZeroClass classification = ScalarZeroClass::Inconclusive;
  bool linear = false;
  std::optional<double> amplification;
  std::optional<Counterexample> escape;
  std::string method;
};

struct StabilityCertificate {
  StabilityClaim claim = StabilityClaim::None;
  TheoremId theorem = TheoremId::T3_1;
  std::vector<HypothesisMargin> evidence;
  std::optional<Counterexample> counterexample;
  std::optional<CertificateBounds> bounds;
  std::optional<ScalarProbeReport> scalar_probe;
  std::string note;  ///< set when the claim is withheld without a counterexample
  // Plan echo for reproducibility.
  std::vector<double> plan_t_grid;
  std::size_t plan_x_count = 0;
  std::vector<double> plan_h_sched;
  std::vector<double> plan_eps_list;

  [[nodiscard]] bool established() const { return claim != StabilityClaim::None; }
};

/// Evaluates the selected V family. Throws std::domain_error when x is
/// outside S(rho) and ExprEvalException when a weight fails to evaluate.
[[nodiscard]] double eval_V(const LyapunovSpec& spec, double t, const FuzzyBox& x);

/// The right-hand side as a fuzzy value f(t, x); linear coefficients act by
/// fuzzy scalar multiplication on the cuts.
[[nodiscard]] FuzzyBox rhs_value(const Rhs& rhs, double t, const FuzzyBox& x);

/// Upper-biased finite surrogate of the one-sided derivative of V along the
/// field: max over the two finest schedule steps of
/// (V(t+h, x + h f(t,x)) - V(t, x)) / h.
[[nodiscard]] double dini_upper(const LyapunovSpec& spec, const Rhs& rhs, double t,
                                const FuzzyBox& x, const HSchedule& sched);

/// Probes the zero solution of w' = g(t, w). Linear-in-w right-hand sides
/// with a numerically recognized coefficient are classified analytically
/// (quadrature of the positive part plus a closed-form tail); everything
/// else is probed empirically with maximal solutions. Requires g(t, 0) = 0
/// on the time grid (throws std::invalid_argument otherwise).
[[nodiscard]] ScalarProbeReport scalar_stability_probe(const ScalarFn& g,
                                                       const SamplingPlan& plan);

/// Grid-checks the hypotheses of the selected stability criterion and
/// assembles a certificate: margins per hypothesis, the first violating
/// sample as a counterexample when falsified, and the constructed bounds
/// (decay rate and envelope for 3.5, delta/T tables for 3.2/3.4) on success.
/// The result is grid-verified evidence, not a proof.
[[nodiscard]] StabilityCertificate check_theorem(const LyapunovSpec& spec, const Rhs& rhs,
                                                 TheoremId which, const SamplingPlan& plan);

/// Worst-case growth factor of solutions of w' = a(t) w past `from`, i.e.
/// exp of the integral of max(a, 0) over [from, infinity), when the
/// coefficient is numerically recognized as one of the integrable forms
/// (constant, c/(1+t^2), c*exp(-k t)). Nullopt when unrecognized.
[[nodiscard]] std::optional<double> linear_tail_amplification(const Rhs& rhs, double from);

}  // namespace fuzzydyn
