#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "fuzzydyn/box.hpp"
#include "fuzzydyn/expr.hpp"
#include "fuzzydyn/result.hpp"
#include "fuzzydyn/solve_error.hpp"

namespace fuzzydyn {

/// Right-hand side f(t, x) = a(t) * x, applied coordinate-wise to the
/// level cuts. a must be a function of t alone.
struct LinearScalarRhs {
  ScalarFn a;
};

/// Decoupled endpoint dynamics: per coordinate i, the cut endpoints evolve
/// as lo' = flo[i](t, lo, hi) and hi' = fhi[i](t, lo, hi). The functions
/// must vanish at (t, 0, 0) so the crisp zero stays a fixed point, and they
/// must keep widths nonnegative (checked while solving).
struct EndpointFieldRhs {
  std::vector<std::function<double(double, double, double)>> flo;
  std::vector<std::function<double(double, double, double)>> fhi;
};

using Rhs = std::variant<LinearScalarRhs, EndpointFieldRhs>;

/// Fuzzy initial-value problem on [t0, horizon], posed inside the ball
/// S(rho) = { x : d[x, 0] < rho }.
struct FuzzyIvp {
  double t0;
  FuzzyBox x0;
  Rhs rhs;
  double horizon;
  double dt;    ///< base integrator step; halved until accepted
  double rho;
};

/// Time-sampled solution. States are immutable; interpolation is linear in
/// t per level endpoint, which preserves nesting.
class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<FuzzyBox> states);

  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] const std::vector<FuzzyBox>& states() const noexcept { return states_; }
  [[nodiscard]] double t_begin() const { return times_.front(); }
  [[nodiscard]] double t_end() const { return times_.back(); }

  /// Linearly interpolated state; throws std::out_of_range outside the span.
  [[nodiscard]] FuzzyBox state_at(double t) const;

 private:
  std::vector<double> times_;
  std::vector<FuzzyBox> states_;
};

/// Integrates the level-wise endpoint reduction of the problem with classical
/// RK4 plus a step-halving acceptance test (two refinements must agree within
/// 1e-8 at the horizon; at most 12 halvings).
///
/// For the linear right-hand side the endpoint law is
///   lo' = min(a*lo, a*hi),  hi' = max(a*lo, a*hi),
/// so widths never shrink. This is the price of staying inside the Hukuhara
/// framework: genuinely fuzzy states cannot contract toward the crisp zero,
/// and a sign change in a(t) grows the state instead of shrinking it.
[[nodiscard]] Result<Trajectory, SolveError> solve(const FuzzyIvp& ivp);

/// Metric distance from the interpolated state to the crisp zero.
[[nodiscard]] double distance_to_zero(const Trajectory& traj, double t);

}  // namespace fuzzydyn
