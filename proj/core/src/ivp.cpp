#include "fuzzydyn/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rk4_detail.hpp"

namespace fuzzydyn {

std::string to_string(SolveError::Kind kind) {
  switch (kind) {
    case SolveError::Kind::DomainExit: return "DomainExit";
    case SolveError::Kind::WidthViolation: return "WidthViolation";
    case SolveError::Kind::NoConvergence: return "NoConvergence";
    case SolveError::Kind::Blowup: return "Blowup";
    case SolveError::Kind::NonMonotoneEps: return "NonMonotoneEps";
    case SolveError::Kind::EvalFailure: return "EvalFailure";
  }
  return "UnknownSolveError";
}

std::string to_string(const SolveError& err) {
  std::string s = to_string(err.kind) + " at t=" + std::to_string(err.t);
  if (!err.detail.empty()) s += ": " + err.detail;
  return s;
}

Trajectory::Trajectory(std::vector<double> times, std::vector<FuzzyBox> states)
    : times_(std::move(times)), states_(std::move(states)) {
  if (times_.empty() || times_.size() != states_.size())
    throw std::invalid_argument("Trajectory: times/states size mismatch");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1]))
      throw std::invalid_argument("Trajectory: times must increase");
    if (!states_[k].same_shape(states_[0]))
      throw std::invalid_argument("Trajectory: states must share grid and dimension");
  }
}

FuzzyBox Trajectory::state_at(double t) const {
  if (t < times_.front() || t > times_.back())
    throw std::out_of_range("Trajectory: time outside the sampled span");
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto hi_idx = static_cast<std::size_t>(it - times_.begin());
  if (hi_idx == 0 || times_[hi_idx] == t) return states_[std::min(hi_idx, times_.size() - 1)];
  const std::size_t lo_idx = hi_idx - 1;
  const double u = (t - times_[lo_idx]) / (times_[hi_idx] - times_[lo_idx]);
  const FuzzyBox& A = states_[lo_idx];
  const FuzzyBox& B = states_[hi_idx];
  std::vector<Box> cuts;
  cuts.reserve(A.levels());
  for (std::size_t j = 0; j < A.levels(); ++j) {
    std::vector<double> lo(A.dim()), hi(A.dim());
    for (std::size_t i = 0; i < A.dim(); ++i) {
      lo[i] = A.cut(j).lo(i) + u * (B.cut(j).lo(i) - A.cut(j).lo(i));
      hi[i] = A.cut(j).hi(i) + u * (B.cut(j).hi(i) - A.cut(j).hi(i));
    }
    cuts.emplace_back(std::move(lo), std::move(hi));
  }
  auto state = FuzzyBox::try_from_cuts(A.grid(), std::move(cuts));
  if (!state) throw std::logic_error("Trajectory: interpolation broke nesting");
  return *state;
}

namespace {

constexpr double kOdeTol = 1e-8;
constexpr std::size_t kMaxHalvings = 12;
constexpr double kNestingRepair = 1e-12;

// Flat layout of the endpoint state: entry (j * dim + i) * 2 holds lo, +1 hi.
std::size_t idx_lo(std::size_t j, std::size_t i, std::size_t dim) { return (j * dim + i) * 2; }

std::vector<double> flatten(const FuzzyBox& x) {
  std::vector<double> y(x.levels() * x.dim() * 2);
  for (std::size_t j = 0; j < x.levels(); ++j) {
    for (std::size_t i = 0; i < x.dim(); ++i) {
      y[idx_lo(j, i, x.dim())] = x.cut(j).lo(i);
      y[idx_lo(j, i, x.dim()) + 1] = x.cut(j).hi(i);
    }
  }
  return y;
}

std::optional<FuzzyBox> unflatten(const LevelGrid& grid, std::size_t dim,
                                  const std::vector<double>& y) {
  std::vector<Box> cuts;
  cuts.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> lo(dim), hi(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(y[idx_lo(j, i, dim)], y[idx_lo(j, i, dim) + 1]);
      hi[i] = std::max(y[idx_lo(j, i, dim)], y[idx_lo(j, i, dim) + 1]);
    }
    cuts.emplace_back(std::move(lo), std::move(hi));
  }
  return FuzzyBox::try_from_cuts(grid, std::move(cuts), 1e-10);
}

double flat_distance_to_zero(const std::vector<double>& y) {
  double d = 0.0;
  for (double v : y) d = std::max(d, std::abs(v));
  return d;
}

double flat_sup_metric(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

detail::DerivFn make_deriv(const Rhs& rhs, std::size_t levels, std::size_t dim) {
  if (const auto* linear = std::get_if<LinearScalarRhs>(&rhs)) {
    const ScalarFn a = linear->a;
    return [a, levels, dim](double t, const std::vector<double>& y,
                            std::vector<double>& dy) -> std::optional<SolveError> {
      const auto at = a.eval(t, 0.0);
      if (!at)
        return SolveError{SolveError::Kind::EvalFailure, t,
                          "a(t): " + to_string(at.error().kind)};
      const double av = at.value();
      for (std::size_t j = 0; j < levels; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
          const std::size_t k = idx_lo(j, i, dim);
          const double dlo = av * y[k];
          const double dhi = av * y[k + 1];
          dy[k] = std::min(dlo, dhi);
          dy[k + 1] = std::max(dlo, dhi);
        }
      }
      return std::nullopt;
    };
  }
  const auto& field = std::get<EndpointFieldRhs>(rhs);
  return [&field, levels, dim](double t, const std::vector<double>& y,
                               std::vector<double>& dy) -> std::optional<SolveError> {
    for (std::size_t j = 0; j < levels; ++j) {
      for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t k = idx_lo(j, i, dim);
        dy[k] = field.flo[i](t, y[k], y[k + 1]);
        dy[k + 1] = field.fhi[i](t, y[k], y[k + 1]);
        if (!std::isfinite(dy[k]) || !std::isfinite(dy[k + 1]))
          return SolveError{SolveError::Kind::EvalFailure, t,
                            "endpoint field returned a non-finite derivative"};
      }
    }
    return std::nullopt;
  };
}

detail::StepCheckFn make_step_check(std::size_t levels, std::size_t dim, double rho) {
  return [levels, dim, rho](double t, std::vector<double>& y) -> std::optional<SolveError> {
    // Width nonnegativity, with a small clamp for rounding noise.
    for (std::size_t j = 0; j < levels; ++j) {
      for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t k = idx_lo(j, i, dim);
        const double width = y[k + 1] - y[k];
        if (width < -kNestingRepair)
          return SolveError{SolveError::Kind::WidthViolation, t,
                            "negative cut width beyond tolerance"};
        if (width < 0.0) {
          const double mid = 0.5 * (y[k] + y[k + 1]);
          y[k] = y[k + 1] = mid;
        }
      }
    }
    // Nesting renormalization by outward rounding, bounded by the repair
    // tolerance so genuine violations are surfaced instead of hidden.
    for (std::size_t j = 1; j < levels; ++j) {
      for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t k = idx_lo(j, i, dim);
        const std::size_t kp = idx_lo(j - 1, i, dim);
        if (y[k] < y[kp]) {
          if (y[kp] - y[k] > kNestingRepair)
            return SolveError{SolveError::Kind::WidthViolation, t,
                              "level nesting violated beyond tolerance"};
          y[kp] = y[k];
        }
        if (y[k + 1] > y[kp + 1]) {
          if (y[k + 1] - y[kp + 1] > kNestingRepair)
            return SolveError{SolveError::Kind::WidthViolation, t,
                              "level nesting violated beyond tolerance"};
          y[kp + 1] = y[k + 1];
        }
      }
    }
    if (flat_distance_to_zero(y) >= rho)
      return SolveError{SolveError::Kind::DomainExit, t, "solution left S(rho)"};
    return std::nullopt;
  };
}

void validate(const FuzzyIvp& ivp) {
  if (!(ivp.t0 >= 0.0)) throw std::invalid_argument("FuzzyIvp: t0 must be >= 0");
  if (!(ivp.horizon > ivp.t0)) throw std::invalid_argument("FuzzyIvp: horizon must exceed t0");
  if (!(ivp.dt > 0.0)) throw std::invalid_argument("FuzzyIvp: dt must be positive");
  if (!(ivp.rho > 0.0)) throw std::invalid_argument("FuzzyIvp: rho must be positive");
  if (!(sup_metric_to_zero(ivp.x0) < ivp.rho))
    throw std::invalid_argument("FuzzyIvp: x0 must lie inside S(rho)");
  if (const auto* linear = std::get_if<LinearScalarRhs>(&ivp.rhs)) {
    if (linear->a.references_w())
      throw std::invalid_argument("FuzzyIvp: linear coefficient must depend on t only");
  } else {
    const auto& field = std::get<EndpointFieldRhs>(ivp.rhs);
    if (field.flo.size() != ivp.x0.dim() || field.fhi.size() != ivp.x0.dim())
      throw std::invalid_argument("FuzzyIvp: endpoint field arity != dimension");
    // The crisp zero must be a fixed point of the dynamics.
    for (double t : {ivp.t0, 0.5 * (ivp.t0 + ivp.horizon), ivp.horizon}) {
      for (std::size_t i = 0; i < ivp.x0.dim(); ++i) {
        if (std::abs(field.flo[i](t, 0.0, 0.0)) > 1e-12 ||
            std::abs(field.fhi[i](t, 0.0, 0.0)) > 1e-12)
          throw std::invalid_argument("FuzzyIvp: endpoint field does not fix the origin");
      }
    }
  }
}

}  // namespace

Result<Trajectory, SolveError> solve(const FuzzyIvp& ivp) {
  validate(ivp);
  const std::size_t levels = ivp.x0.levels();
  const std::size_t dim = ivp.x0.dim();

  const auto deriv = make_deriv(ivp.rhs, levels, dim);
  const auto check = make_step_check(levels, dim, ivp.rho);
  auto run = detail::rk4_step_halving(deriv, ivp.t0, flatten(ivp.x0), ivp.horizon,
                                      ivp.dt, kOdeTol, kMaxHalvings, check,
                                      flat_sup_metric);
  if (!run) return run.error();

  std::vector<FuzzyBox> states;
  states.reserve(run.value().times.size());
  for (const auto& y : run.value().states) {
    auto state = unflatten(ivp.x0.grid(), dim, y);
    if (!state)
      return SolveError{SolveError::Kind::WidthViolation, ivp.horizon,
                        "accepted state could not be renormalized"};
    states.push_back(std::move(*state));
  }
  return Trajectory(std::move(run).value().times, std::move(states));
}

double distance_to_zero(const Trajectory& traj, double t) {
  return sup_metric_to_zero(traj.state_at(t));
}

}  // namespace fuzzydyn
