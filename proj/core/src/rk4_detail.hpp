#pragma once

// Fixed-step classical RK4 with a step-halving acceptance loop, shared by the
// fuzzy endpoint solver and the scalar comparison solver. Deterministic by
// construction: the sample grid depends only on (t0, horizon, dt).

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "fuzzydyn/result.hpp"
#include "fuzzydyn/solve_error.hpp"

namespace fuzzydyn::detail {

struct OdeRun {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

/// Writes dy/dt into `dydt`; returns an error to abort the run.
using DerivFn = std::function<std::optional<SolveError>(
    double t, const std::vector<double>& y, std::vector<double>& dydt)>;

/// Invoked after each accepted step; may repair `y` in place (e.g. nesting
/// renormalization) or reject the state.
using StepCheckFn = std::function<std::optional<SolveError>(double t, std::vector<double>& y)>;

/// Distance between two final states, used by the halving acceptance test.
using StateMetricFn = std::function<double(const std::vector<double>&, const std::vector<double>&)>;

inline Result<OdeRun, SolveError> rk4_fixed(const DerivFn& deriv, double t0,
                                            std::vector<double> y0, double horizon,
                                            double dt, const StepCheckFn& check) {
  OdeRun run;
  const double span = horizon - t0;
  const auto steps =
      static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-12)));
  run.times.reserve(steps + 1);
  run.states.reserve(steps + 1);
  run.times.push_back(t0);
  run.states.push_back(y0);

  const std::size_t n = y0.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  std::vector<double> y = std::move(y0);

  for (std::size_t s = 0; s < steps; ++s) {
    const double t = run.times.back();
    const double t_next = (s + 1 == steps) ? horizon : t0 + dt * static_cast<double>(s + 1);
    const double h = t_next - t;

    if (auto err = deriv(t, y, k1)) return *err;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    if (auto err = deriv(t + 0.5 * h, tmp, k2)) return *err;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    if (auto err = deriv(t + 0.5 * h, tmp, k3)) return *err;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    if (auto err = deriv(t_next, tmp, k4)) return *err;
    for (std::size_t i = 0; i < n; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (check) {
      if (auto err = check(t_next, y)) return *err;
    }
    run.times.push_back(t_next);
    run.states.push_back(y);
  }
  return run;
}

/// Runs rk4_fixed at dt, dt/2, dt/4, ... until two consecutive refinements
/// agree at the horizon within `tol` under `metric`, then returns the finer
/// run. After `max_halvings` attempts, either gives up with NoConvergence or
/// (when `accept_on_exhaustion` is set) returns the finest run anyway —
/// callers with a separate correctness gate use the latter.
inline Result<OdeRun, SolveError> rk4_step_halving(
    const DerivFn& deriv, double t0, const std::vector<double>& y0, double horizon,
    double dt0, double tol, std::size_t max_halvings, const StepCheckFn& check,
    const StateMetricFn& metric, bool accept_on_exhaustion = false) {
  auto coarse = rk4_fixed(deriv, t0, y0, horizon, dt0, check);
  if (!coarse) return coarse.error();
  double dt = dt0;
  for (std::size_t k = 0; k < max_halvings; ++k) {
    dt *= 0.5;
    auto fine = rk4_fixed(deriv, t0, y0, horizon, dt, check);
    if (!fine) return fine.error();
    const double gap = metric(coarse.value().states.back(), fine.value().states.back());
    if (gap <= tol) return fine;
    coarse = std::move(fine);
  }
  if (accept_on_exhaustion) return coarse;
  return SolveError{SolveError::Kind::NoConvergence, horizon,
                    "step halving exhausted before meeting tolerance"};
}

}  // namespace fuzzydyn::detail
