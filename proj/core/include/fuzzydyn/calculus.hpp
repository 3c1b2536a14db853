#pragma once

#include <functional>
#include <vector>

#include "fuzzydyn/box.hpp"
#include "fuzzydyn/result.hpp"

namespace fuzzydyn {

struct TimeInterval {
  double a;
  double b;

  [[nodiscard]] bool contains(double t) const { return t >= a && t <= b; }
};

/// A fuzzy-valued function of time on a closed interval. Evaluation must be
/// pure and re-entrant: quadrature and difference quotients may call it
/// concurrently and in any order.
class FuzzyPath {
 public:
  FuzzyPath(TimeInterval domain, LevelGrid grid, std::size_t dim,
            std::function<FuzzyBox(double)> eval);

  [[nodiscard]] const TimeInterval& domain() const noexcept { return domain_; }
  [[nodiscard]] const LevelGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  /// Evaluates at t; throws std::out_of_range outside the domain.
  [[nodiscard]] FuzzyBox operator()(double t) const;

 private:
  TimeInterval domain_;
  LevelGrid grid_;
  std::size_t dim_;
  std::function<FuzzyBox(double)> eval_;
};

/// Strictly decreasing positive step sizes realizing the one-sided limit
/// h -> 0+ as a finite schedule.
struct HSchedule {
  std::vector<double> steps;

  /// Default geometric schedule 1e-2 * 2^-k, k = 0..m-1.
  static HSchedule geometric(double h0 = 1e-2, double ratio = 0.5, std::size_t m = 8);

  [[nodiscard]] double finest() const { return steps.back(); }
};

struct DerivativeFailure {
  enum class Reason {
    MissingForwardDifference,   ///< F(t0+h) (-) F(t0) does not exist for some h
    MissingBackwardDifference,  ///< F(t0) (-) F(t0-h) does not exist for some h
    NoCauchyConvergence,        ///< the two finest quotients disagree
    OneSidedMismatch,           ///< forward and backward limits disagree
  };
  Reason reason;
  double h;  ///< step at which the failure was observed
};

/// Hukuhara derivative estimate at t0. Difference quotients are formed along
/// the schedule on each available side (one-sided at the domain endpoints);
/// the two finest quotients per side must agree within
/// 1e-4 * |quotient| + 1e-8 (Cauchy test), and the two sides must agree
/// within the same tolerance. Returns the finest available quotient.
[[nodiscard]] Result<FuzzyBox, DerivativeFailure> h_derivative(
    const FuzzyPath& path, double t0, const HSchedule& sched = HSchedule::geometric());

/// Level-wise endpoint integral over [a, b] by composite Simpson quadrature
/// with n_steps subintervals (rounded up to an even count). Nested cuts of
/// the integrand make the result nested by construction.
[[nodiscard]] FuzzyBox integrate(const FuzzyPath& path, double a, double b,
                                 std::size_t n_steps);

/// Convenience overload using 256 subintervals per unit time.
[[nodiscard]] FuzzyBox integrate(const FuzzyPath& path, double a, double b);

}  // namespace fuzzydyn
