#include "fuzzydyn/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace fuzzydyn {

FuzzyPath::FuzzyPath(TimeInterval domain, LevelGrid grid, std::size_t dim,
                     std::function<FuzzyBox(double)> eval)
    : domain_(domain), grid_(std::move(grid)), dim_(dim), eval_(std::move(eval)) {
  if (!(domain_.a <= domain_.b))
    throw std::invalid_argument("FuzzyPath: empty time domain");
  if (!eval_) throw std::invalid_argument("FuzzyPath: missing evaluator");
}

FuzzyBox FuzzyPath::operator()(double t) const {
  if (!domain_.contains(t))
    throw std::out_of_range("FuzzyPath: evaluation outside the domain");
  FuzzyBox value = eval_(t);
  if (value.grid() != grid_ || value.dim() != dim_)
    throw std::logic_error("FuzzyPath: evaluator changed grid or dimension");
  return value;
}

HSchedule HSchedule::geometric(double h0, double ratio, std::size_t m) {
  if (!(h0 > 0.0) || !(ratio > 0.0) || !(ratio < 1.0) || m == 0)
    throw std::invalid_argument("HSchedule::geometric: invalid parameters");
  HSchedule sched;
  sched.steps.reserve(m);
  double h = h0;
  for (std::size_t k = 0; k < m; ++k) {
    sched.steps.push_back(h);
    h *= ratio;
  }
  return sched;
}

namespace {

struct QuotientSeq {
  // The two finest quotients of the side; empty when the side is unusable.
  std::vector<FuzzyBox> finest;
  std::optional<DerivativeFailure> failure;
};

QuotientSeq side_quotients(const FuzzyPath& path, double t0, const FuzzyBox& at_t0,
                           const std::vector<double>& steps, bool forward) {
  QuotientSeq out;
  const auto reason = forward ? DerivativeFailure::Reason::MissingForwardDifference
                              : DerivativeFailure::Reason::MissingBackwardDifference;
  for (double h : steps) {
    const FuzzyBox shifted = path(forward ? t0 + h : t0 - h);
    const auto diff = forward ? h_difference(shifted, at_t0) : h_difference(at_t0, shifted);
    if (!diff) {
      out.failure = DerivativeFailure{reason, h};
      return out;
    }
    if (h == steps[steps.size() - 1] || h == steps[steps.size() - 2])
      out.finest.push_back(scale(1.0 / h, *diff));
  }
  return out;
}

double accept_tol(const FuzzyBox& q) { return 1e-4 * sup_metric_to_zero(q) + 1e-8; }

}  // namespace

Result<FuzzyBox, DerivativeFailure> h_derivative(const FuzzyPath& path, double t0,
                                                 const HSchedule& sched) {
  if (!path.domain().contains(t0))
    throw std::out_of_range("h_derivative: t0 outside the path domain");
  if (sched.steps.size() < 2)
    throw std::invalid_argument("h_derivative: schedule needs at least two steps");
  for (std::size_t k = 1; k < sched.steps.size(); ++k) {
    if (!(sched.steps[k] > 0.0) || !(sched.steps[k] < sched.steps[k - 1]))
      throw std::invalid_argument("h_derivative: schedule must strictly decrease");
  }

  std::vector<double> fwd_steps, bwd_steps;
  for (double h : sched.steps) {
    if (t0 + h <= path.domain().b) fwd_steps.push_back(h);
    if (t0 - h >= path.domain().a) bwd_steps.push_back(h);
  }
  const bool use_fwd = fwd_steps.size() >= 2;
  const bool use_bwd = bwd_steps.size() >= 2;
  if (!use_fwd && !use_bwd)
    throw std::invalid_argument("h_derivative: no usable steps inside the domain");

  const FuzzyBox at_t0 = path(t0);
  QuotientSeq fwd, bwd;
  if (use_fwd) {
    fwd = side_quotients(path, t0, at_t0, fwd_steps, /*forward=*/true);
    if (fwd.failure) return *fwd.failure;
  }
  if (use_bwd) {
    bwd = side_quotients(path, t0, at_t0, bwd_steps, /*forward=*/false);
    if (bwd.failure) return *bwd.failure;
  }

  const auto cauchy_ok = [&](const QuotientSeq& side, double h_fin) -> std::optional<DerivativeFailure> {
    const FuzzyBox& coarse = side.finest[0];
    const FuzzyBox& fine = side.finest[1];
    if (sup_metric(fine, coarse) > accept_tol(fine))
      return DerivativeFailure{DerivativeFailure::Reason::NoCauchyConvergence, h_fin};
    return std::nullopt;
  };
  if (use_fwd) {
    if (auto f = cauchy_ok(fwd, fwd_steps.back())) return *f;
  }
  if (use_bwd) {
    if (auto f = cauchy_ok(bwd, bwd_steps.back())) return *f;
  }
  if (use_fwd && use_bwd) {
    const FuzzyBox& qf = fwd.finest[1];
    const FuzzyBox& qb = bwd.finest[1];
    if (sup_metric(qf, qb) > accept_tol(qf))
      return DerivativeFailure{DerivativeFailure::Reason::OneSidedMismatch,
                               fwd_steps.back()};
  }
  return use_fwd ? fwd.finest[1] : bwd.finest[1];
}

FuzzyBox integrate(const FuzzyPath& path, double a, double b, std::size_t n_steps) {
  if (!(path.domain().contains(a) && path.domain().contains(b)) || a > b)
    throw std::invalid_argument("integrate: span must satisfy domain.a <= a <= b <= domain.b");
  if (n_steps == 0) throw std::invalid_argument("integrate: n_steps must be >= 1");
  if (a == b) return FuzzyBox::zero(path.grid(), path.dim());

  const std::size_t n = n_steps + (n_steps % 2);  // Simpson needs an even count
  const double h = (b - a) / static_cast<double>(n);
  const std::size_t levels = path.grid().size();
  const std::size_t dim = path.dim();
  std::vector<std::vector<double>> lo(levels, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> hi(levels, std::vector<double>(dim, 0.0));

  for (std::size_t k = 0; k <= n; ++k) {
    const double t = (k == n) ? b : a + h * static_cast<double>(k);
    const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const FuzzyBox sample = path(t);
    for (std::size_t j = 0; j < levels; ++j) {
      for (std::size_t i = 0; i < dim; ++i) {
        lo[j][i] += weight * sample.cut(j).lo(i);
        hi[j][i] += weight * sample.cut(j).hi(i);
      }
    }
  }
  const double factor = h / 3.0;
  std::vector<Box> cuts;
  cuts.reserve(levels);
  for (std::size_t j = 0; j < levels; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      lo[j][i] *= factor;
      hi[j][i] *= factor;
    }
    cuts.emplace_back(std::move(lo[j]), std::move(hi[j]));
  }
  auto result = FuzzyBox::try_from_cuts(path.grid(), std::move(cuts));
  if (!result) throw std::logic_error("integrate: quadrature produced non-nested cuts");
  return *result;
}

FuzzyBox integrate(const FuzzyPath& path, double a, double b) {
  const double span = b - a;
  const auto n = static_cast<std::size_t>(std::ceil(256.0 * std::max(span, 0.0)));
  return integrate(path, a, b, std::max<std::size_t>(n, 2));
}

}  // namespace fuzzydyn
