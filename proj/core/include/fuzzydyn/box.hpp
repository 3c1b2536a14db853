#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fuzzydyn {

/// Axis-aligned box in R^n, the concrete compact convex set used as an
/// alpha-cut. A degenerate box (lo == hi) represents a crisp point.
class Box {
 public:
  /// Requires lo.size() == hi.size() >= 1 and lo[i] <= hi[i] for all i.
  Box(std::vector<double> lo, std::vector<double> hi);

  /// Degenerate box holding a single point.
  static Box point(std::vector<double> coords);

  [[nodiscard]] std::size_t dim() const noexcept { return lo_.size(); }
  [[nodiscard]] std::span<const double> lo() const noexcept { return lo_; }
  [[nodiscard]] std::span<const double> hi() const noexcept { return hi_; }
  [[nodiscard]] double lo(std::size_t i) const { return lo_[i]; }
  [[nodiscard]] double hi(std::size_t i) const { return hi_[i]; }
  [[nodiscard]] double width(std::size_t i) const { return hi_[i] - lo_[i]; }

  bool operator==(const Box&) const = default;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Hausdorff distance between two boxes of equal dimension under the
/// max-coordinate norm: max_i max(|lo_a - lo_b|, |hi_a - hi_b|).
[[nodiscard]] double box_hausdorff(const Box& a, const Box& b);

/// Finite discretization of the membership-level continuum:
/// 0 = alpha_0 < alpha_1 < ... < alpha_L = 1 with L >= 1.
class LevelGrid {
 public:
  explicit LevelGrid(std::vector<double> alphas);

  /// Uniformly spaced grid with `count` levels (default 11: 0, 0.1, ..., 1).
  static LevelGrid uniform(std::size_t count = kDefaultLevelCount);

  static constexpr std::size_t kDefaultLevelCount = 11;

  /// Number of stored levels, i.e. L + 1.
  [[nodiscard]] std::size_t size() const noexcept { return alphas_.size(); }
  [[nodiscard]] double alpha(std::size_t j) const { return alphas_[j]; }
  [[nodiscard]] std::span<const double> alphas() const noexcept { return alphas_; }

  bool operator==(const LevelGrid&) const = default;

 private:
  std::vector<double> alphas_;
};

/// A fuzzy set over R^n represented by a nested family of alpha-cut boxes.
/// cuts[j] is the cut at grid.alpha(j); cuts shrink (or stay equal) as the
/// level rises, and the top cut is non-empty by construction.
///
/// Immutable after construction; safe to share across threads.
class FuzzyBox {
 public:
  /// Validates nesting exactly; throws std::invalid_argument on violation.
  FuzzyBox(LevelGrid grid, std::vector<Box> cuts);

  /// Crisp zero: every cut is the degenerate box at the origin.
  static FuzzyBox zero(LevelGrid grid, std::size_t dim);

  /// Crisp point: every cut degenerate at `coords`.
  static FuzzyBox crisp(LevelGrid grid, std::vector<double> coords);

  /// Builds a FuzzyBox from cuts that may carry floating-point noise:
  /// inverted endpoints and nesting violations up to `repair_tol` are
  /// repaired (midpoint clamp, outward nesting pass); anything larger
  /// yields nullopt.
  static std::optional<FuzzyBox> try_from_cuts(LevelGrid grid,
                                               std::vector<Box> cuts,
                                               double repair_tol = kRepairTol);

  /// Endpoint repair budget used throughout the library. Kept well below
  /// the 1e-12 scale at which metric invariants are asserted.
  static constexpr double kRepairTol = 5e-13;

  [[nodiscard]] const LevelGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t levels() const noexcept { return cuts_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return cuts_.front().dim(); }
  [[nodiscard]] const Box& cut(std::size_t j) const { return cuts_[j]; }
  [[nodiscard]] const std::vector<Box>& cuts() const noexcept { return cuts_; }

  /// True when `other` lives on the identical grid with equal dimension.
  [[nodiscard]] bool same_shape(const FuzzyBox& other) const;

  bool operator==(const FuzzyBox&) const = default;

 private:
  LevelGrid grid_;
  std::vector<Box> cuts_;
};

/// Level-wise Minkowski sum. Requires identical grid and dimension.
[[nodiscard]] FuzzyBox add(const FuzzyBox& u, const FuzzyBox& v);

/// Level-wise scalar multiple; endpoints swap when lambda < 0, and
/// lambda == 0 collapses every cut to the origin.
[[nodiscard]] FuzzyBox scale(double lambda, const FuzzyBox& u);

/// Hukuhara difference z with add(y, z) == x, when it exists in this
/// representation: requires width(x) >= width(y) per level and coordinate
/// and a nested result. Returns nullopt otherwise.
[[nodiscard]] std::optional<FuzzyBox> h_difference(const FuzzyBox& x,
                                                   const FuzzyBox& y);

/// Supremum (over grid levels) of the per-level box Hausdorff distances.
/// Because the level continuum is discretized, this is a lower bound of
/// the true supremum metric of the ideal objects.
[[nodiscard]] double sup_metric(const FuzzyBox& u, const FuzzyBox& v);

/// sup_metric(u, zero) computed without materializing the zero element.
[[nodiscard]] double sup_metric_to_zero(const FuzzyBox& u);

/// Per-coordinate widths of the cut at level j.
[[nodiscard]] std::vector<double> diameter(const FuzzyBox& u, std::size_t level);

/// Piecewise-constant resampling in alpha with conservative outward
/// rounding: each target level takes the source cut at the largest source
/// alpha not exceeding it.
[[nodiscard]] FuzzyBox resample(const FuzzyBox& u, const LevelGrid& target);

}  // namespace fuzzydyn
