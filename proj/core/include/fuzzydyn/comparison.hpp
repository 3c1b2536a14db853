#pragma once

#include <cstddef>
#include <vector>

#include "fuzzydyn/expr.hpp"
#include "fuzzydyn/result.hpp"
#include "fuzzydyn/solve_error.hpp"

namespace fuzzydyn {

/// Scalar initial-value problem w' = g(t, w), w(t0) = w0 on [t0, horizon].
struct ScalarIvp {
  ScalarFn g;
  double t0;
  double w0;
  double horizon;
  double dt;
};

class ScalarTrajectory {
 public:
  ScalarTrajectory(std::vector<double> times, std::vector<double> values);

  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] double t_begin() const { return times_.front(); }
  [[nodiscard]] double t_end() const { return times_.back(); }

  /// Linear interpolation; throws std::out_of_range outside the span.
  [[nodiscard]] double value_at(double t) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Estimate of the maximal solution of w' = g(t, w): integrates the shifted
/// equations w' = g + eps_k for eps_k = 1e-3 * 4^-k, k = 0..eps_levels-1,
/// asserts the runs decrease pointwise in k (within 1e-9), and returns the
/// finest run. For Lipschitz g this converges to the unique solution; for
/// non-Lipschitz g it approximates the maximal solution from above, which is
/// the correct one-sided comparison object.
[[nodiscard]] Result<ScalarTrajectory, SolveError> maximal_solution(
    const ScalarIvp& ivp, std::size_t eps_levels = 6);

/// Outcome of the comparison-inequality check. `hypothesis` asks whether the
/// forward difference quotients of m stay below g(t, m) + slack with
/// slack = 1e-6 + 10 * dt * |second difference| / dt^2 * dt; `conclusion`
/// asks whether m <= r + 1e-6 at every sample of m.
struct LemmaVerdict {
  bool precondition_ok = false;  ///< m(t0) <= r(t0) + 1e-9
  bool hypothesis_ok = false;
  bool conclusion_ok = false;
  double worst_hypothesis_margin = 0.0;  ///< min over samples of g(t,m) - d+m (raw, no slack)
  double worst_conclusion_margin = 0.0;  ///< min over samples of r - m
  double hypothesis_argmin_t = 0.0;
  double conclusion_argmin_t = 0.0;
};

/// Checks the differential-inequality hypothesis and the domination
/// conclusion on m's sample grid against the maximal-solution estimate r.
/// Requires the spans to coincide at the start and r to cover m.
[[nodiscard]] LemmaVerdict lemma_check(const ScalarTrajectory& m, const ScalarFn& g,
                                       const ScalarTrajectory& r);

}  // namespace fuzzydyn
