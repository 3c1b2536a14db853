#include "fuzzydyn/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rk4_detail.hpp"

namespace fuzzydyn {

ScalarTrajectory::ScalarTrajectory(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size())
    throw std::invalid_argument("ScalarTrajectory: times/values size mismatch");
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (!(times_[k] > times_[k - 1]))
      throw std::invalid_argument("ScalarTrajectory: times must increase");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("ScalarTrajectory: values must be finite");
}

double ScalarTrajectory::value_at(double t) const {
  if (t < times_.front() || t > times_.back())
    throw std::out_of_range("ScalarTrajectory: time outside the sampled span");
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto hi = static_cast<std::size_t>(it - times_.begin());
  if (hi == 0 || times_[hi] == t) return values_[hi];
  const double u = (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
  return values_[hi - 1] + u * (values_[hi] - values_[hi - 1]);
}

namespace {

constexpr double kOdeTol = 1e-8;
constexpr std::size_t kMaxHalvings = 10;
constexpr double kBlowup = 1e12;
constexpr double kEpsMonotoneSlack = 1e-9;

Result<ScalarTrajectory, SolveError> integrate_shifted(const ScalarIvp& ivp, double eps) {
  const ScalarFn g = ivp.g;
  const detail::DerivFn deriv = [g, eps](double t, const std::vector<double>& y,
                                         std::vector<double>& dy) -> std::optional<SolveError> {
    const auto v = g.eval(t, y[0]);
    if (!v)
      return SolveError{SolveError::Kind::EvalFailure, t,
                        "g(t,w): " + to_string(v.error().kind)};
    dy[0] = v.value() + eps;
    return std::nullopt;
  };
  const detail::StepCheckFn check = [](double t, std::vector<double>& y) -> std::optional<SolveError> {
    if (std::abs(y[0]) > kBlowup)
      return SolveError{SolveError::Kind::Blowup, t, "finite-time escape detected"};
    return std::nullopt;
  };
  const detail::StateMetricFn metric = [](const std::vector<double>& a,
                                          const std::vector<double>& b) {
    return std::abs(a[0] - b[0]);
  };
  // Non-Lipschitz right-hand sides (the maximal-solution cases of interest)
  // converge slowly in dt; halving exhaustion falls back to the finest run,
  // and the epsilon-monotonicity assertion below remains the correctness gate.
  auto run = detail::rk4_step_halving(deriv, ivp.t0, {ivp.w0}, ivp.horizon, ivp.dt,
                                      kOdeTol, kMaxHalvings, check, metric,
                                      /*accept_on_exhaustion=*/true);
  if (!run) return run.error();
  std::vector<double> values;
  values.reserve(run.value().states.size());
  for (const auto& y : run.value().states) values.push_back(y[0]);
  return ScalarTrajectory(std::move(run).value().times, std::move(values));
}

}  // namespace

Result<ScalarTrajectory, SolveError> maximal_solution(const ScalarIvp& ivp,
                                                      std::size_t eps_levels) {
  if (!(ivp.horizon > ivp.t0) || !(ivp.t0 >= 0.0))
    throw std::invalid_argument("maximal_solution: need horizon > t0 >= 0");
  if (!(ivp.dt > 0.0)) throw std::invalid_argument("maximal_solution: dt must be positive");
  if (eps_levels < 2) throw std::invalid_argument("maximal_solution: eps_levels must be >= 2");

  std::vector<ScalarTrajectory> runs;
  runs.reserve(eps_levels);
  double eps = 1e-3;
  for (std::size_t k = 0; k < eps_levels; ++k, eps *= 0.25) {
    auto run = integrate_shifted(ivp, eps);
    if (!run) return run.error();
    runs.push_back(std::move(run).value());
  }
  // The shifted solutions must decrease pointwise as eps shrinks.
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    const auto& finer = runs[k + 1];
    for (std::size_t s = 0; s < finer.times().size(); ++s) {
      const double t = finer.times()[s];
      if (finer.values()[s] > runs[k].value_at(t) + kEpsMonotoneSlack)
        return SolveError{SolveError::Kind::NonMonotoneEps, t,
                          "epsilon-shifted runs are not pointwise decreasing"};
    }
  }
  return std::move(runs.back());
}

LemmaVerdict lemma_check(const ScalarTrajectory& m, const ScalarFn& g,
                         const ScalarTrajectory& r) {
  if (std::abs(m.t_begin() - r.t_begin()) > 1e-9 || m.t_end() > r.t_end() + 1e-9)
    throw std::invalid_argument("lemma_check: trajectories must share the time span");

  LemmaVerdict verdict;
  verdict.precondition_ok = m.values().front() <= r.values().front() + 1e-9;
  if (!verdict.precondition_ok) return verdict;

  const auto& ts = m.times();
  const auto& ms = m.values();

  verdict.hypothesis_ok = true;
  verdict.worst_hypothesis_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double dt = ts[i + 1] - ts[i];
    const double quotient = (ms[i + 1] - ms[i]) / dt;
    const double bound = g.eval_or_throw(ts[i], ms[i]);
    // Forward differences of a smooth m overshoot its upper Dini derivative
    // by O(dt * m''); the slack covers that with sampled curvature, taking
    // the worse of the two second differences adjacent to the interval so an
    // inflection centered on one of them cannot zero the estimate.
    double curvature = 0.0;
    if (i + 2 < ts.size())
      curvature = std::abs(ms[i + 2] - 2.0 * ms[i + 1] + ms[i]) / (dt * dt);
    if (i >= 1)
      curvature = std::max(curvature,
                           std::abs(ms[i + 1] - 2.0 * ms[i] + ms[i - 1]) / (dt * dt));
    const double slack = 1e-6 + 10.0 * dt * curvature;
    const double margin = bound - quotient;
    if (margin < verdict.worst_hypothesis_margin) {
      verdict.worst_hypothesis_margin = margin;
      verdict.hypothesis_argmin_t = ts[i];
    }
    if (margin < -slack) verdict.hypothesis_ok = false;
  }

  verdict.conclusion_ok = true;
  verdict.worst_conclusion_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double margin = r.value_at(ts[i]) - ms[i];
    if (margin < verdict.worst_conclusion_margin) {
      verdict.worst_conclusion_margin = margin;
      verdict.conclusion_argmin_t = ts[i];
    }
    if (margin < -1e-6) verdict.conclusion_ok = false;
  }
  return verdict;
}

}  // namespace fuzzydyn
