#pragma once

// Deterministic random inputs for property tests. Everything is seeded
// explicitly so failures reproduce.

#include <cmath>
#include <random>
#include <vector>

#include <fuzzydyn/box.hpp>
#include <fuzzydyn/calculus.hpp>

namespace testsupport {

using fuzzydyn::Box;
using fuzzydyn::FuzzyBox;
using fuzzydyn::FuzzyPath;
using fuzzydyn::LevelGrid;
using fuzzydyn::TimeInterval;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Absolute-tolerance comparison (doctest's Approx has no margin here).
inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Nonincreasing level profile with s_0 = 1.
inline std::vector<double> level_profile(std::mt19937_64& rng, std::size_t count) {
  std::vector<double> s(count);
  s[0] = 1.0;
  for (std::size_t j = 1; j < count; ++j) s[j] = uniform(rng, 0.0, 1.0);
  std::sort(s.begin() + 1, s.end(), std::greater<>());
  for (std::size_t j = 1; j < count; ++j) s[j] = std::min(s[j], s[j - 1]);
  return s;
}

/// Random nested fuzzy box with centers in [-center, center] and base
/// half-widths in [0, width].
inline FuzzyBox random_fuzzy_box(std::mt19937_64& rng, const LevelGrid& grid,
                                 std::size_t dim, double center = 100.0,
                                 double width = 50.0) {
  const std::size_t levels = grid.size();
  std::vector<std::vector<double>> lo(levels, std::vector<double>(dim));
  std::vector<std::vector<double>> hi(levels, std::vector<double>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const double c = uniform(rng, -center, center);
    const double left = uniform(rng, 0.0, width);
    const double right = uniform(rng, 0.0, width);
    const auto profile = level_profile(rng, levels);
    for (std::size_t j = 0; j < levels; ++j) {
      lo[j][i] = c - left * profile[j];
      hi[j][i] = c + right * profile[j];
    }
  }
  std::vector<Box> cuts;
  cuts.reserve(levels);
  for (std::size_t j = 0; j < levels; ++j)
    cuts.emplace_back(std::move(lo[j]), std::move(hi[j]));
  return FuzzyBox(grid, std::move(cuts));
}

inline FuzzyBox random_crisp_box(std::mt19937_64& rng, const LevelGrid& grid,
                                 std::size_t dim, double center = 100.0) {
  std::vector<double> point(dim);
  for (auto& v : point) v = uniform(rng, -center, center);
  return FuzzyBox::crisp(grid, std::move(point));
}

/// Smooth fuzzy path with nondecreasing widths, so H-differences exist in the
/// forward direction:
///   center  c(t) = p0 + p1 t + p2 sin(t + phase)
///   spread  s(t) = s0 + s1 t + s2 (t + sin t)      (nondecreasing)
///   cut_j(t) = [c - w_j s, c + w_j s] per coordinate.
struct SmoothPathCoeffs {
  double p0, p1, p2, phase, s0, s1, s2;
  std::vector<double> level_widths;  // nonincreasing in the level index

  [[nodiscard]] double center(double t) const {
    return p0 + p1 * t + p2 * std::sin(t + phase);
  }
  [[nodiscard]] double center_dot(double t) const {
    return p1 + p2 * std::cos(t + phase);
  }
  [[nodiscard]] double spread(double t) const {
    return s0 + s1 * t + s2 * (t + std::sin(t));
  }
  [[nodiscard]] double spread_dot(double t) const {
    return s1 + s2 * (1.0 + std::cos(t));
  }
};

inline SmoothPathCoeffs random_smooth_coeffs(std::mt19937_64& rng, const LevelGrid& grid) {
  SmoothPathCoeffs c{};
  c.p0 = uniform(rng, 1.5, 3.0);
  c.p1 = uniform(rng, -0.3, 0.3);
  c.p2 = uniform(rng, 0.2, 0.8);
  c.phase = uniform(rng, 0.0, 6.28);
  c.s0 = uniform(rng, 0.2, 1.0);
  c.s1 = uniform(rng, 0.0, 0.2);
  c.s2 = uniform(rng, 0.0, 0.2);
  c.level_widths = level_profile(rng, grid.size());
  return c;
}

inline FuzzyBox smooth_path_value(const SmoothPathCoeffs& c, const LevelGrid& grid,
                                  double t) {
  const double mid = c.center(t);
  const double s = c.spread(t);
  std::vector<Box> cuts;
  cuts.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = c.level_widths[j] * s;
    cuts.emplace_back(std::vector<double>{mid - w}, std::vector<double>{mid + w});
  }
  return FuzzyBox(grid, std::move(cuts));
}

inline FuzzyPath make_smooth_path(const SmoothPathCoeffs& c, const LevelGrid& grid,
                                  TimeInterval domain) {
  return FuzzyPath(domain, grid, 1,
                   [c, grid](double t) { return smooth_path_value(c, grid, t); });
}

}  // namespace testsupport
