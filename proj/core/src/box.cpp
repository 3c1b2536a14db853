#include "fuzzydyn/box.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fuzzydyn {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

Box::Box(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  require(!lo_.empty(), "Box: dimension must be >= 1");
  require(lo_.size() == hi_.size(), "Box: lo/hi dimension mismatch");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    require(std::isfinite(lo_[i]) && std::isfinite(hi_[i]),
            "Box: endpoints must be finite");
    require(lo_[i] <= hi_[i], "Box: lo > hi");
  }
}

Box Box::point(std::vector<double> coords) {
  std::vector<double> hi = coords;
  return Box(std::move(coords), std::move(hi));
}

double box_hausdorff(const Box& a, const Box& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("box_hausdorff: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    d = std::max(d, std::abs(a.lo(i) - b.lo(i)));
    d = std::max(d, std::abs(a.hi(i) - b.hi(i)));
  }
  return d;
}

LevelGrid::LevelGrid(std::vector<double> alphas) : alphas_(std::move(alphas)) {
  require(alphas_.size() >= 2, "LevelGrid: needs at least two levels");
  require(alphas_.front() == 0.0, "LevelGrid: first level must be 0");
  require(alphas_.back() == 1.0, "LevelGrid: last level must be 1");
  for (std::size_t j = 1; j < alphas_.size(); ++j)
    require(alphas_[j - 1] < alphas_[j], "LevelGrid: levels must increase");
}

LevelGrid LevelGrid::uniform(std::size_t count) {
  require(count >= 2, "LevelGrid::uniform: needs at least two levels");
  std::vector<double> alphas(count);
  const auto steps = static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j)
    alphas[j] = static_cast<double>(j) / steps;
  alphas.back() = 1.0;
  return LevelGrid(std::move(alphas));
}

FuzzyBox::FuzzyBox(LevelGrid grid, std::vector<Box> cuts)
    : grid_(std::move(grid)), cuts_(std::move(cuts)) {
  require(cuts_.size() == grid_.size(), "FuzzyBox: cut count != level count");
  const std::size_t n = cuts_.front().dim();
  for (const Box& c : cuts_)
    require(c.dim() == n, "FuzzyBox: cuts must share dimension");
  for (std::size_t j = 1; j < cuts_.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      require(cuts_[j].lo(i) >= cuts_[j - 1].lo(i) &&
                  cuts_[j].hi(i) <= cuts_[j - 1].hi(i),
              "FuzzyBox: cuts are not nested");
    }
  }
}

FuzzyBox FuzzyBox::zero(LevelGrid grid, std::size_t dim) {
  return crisp(std::move(grid), std::vector<double>(dim, 0.0));
}

FuzzyBox FuzzyBox::crisp(LevelGrid grid, std::vector<double> coords) {
  std::vector<Box> cuts(grid.size(), Box::point(coords));
  return FuzzyBox(std::move(grid), std::move(cuts));
}

std::optional<FuzzyBox> FuzzyBox::try_from_cuts(LevelGrid grid,
                                                std::vector<Box> cuts,
                                                double repair_tol) {
  if (cuts.size() != grid.size() || cuts.empty()) return std::nullopt;
  const std::size_t n = cuts.front().dim();
  std::vector<std::vector<double>> lo(cuts.size()), hi(cuts.size());
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    if (cuts[j].dim() != n) return std::nullopt;
    lo[j].assign(cuts[j].lo().begin(), cuts[j].lo().end());
    hi[j].assign(cuts[j].hi().begin(), cuts[j].hi().end());
    for (std::size_t i = 0; i < n; ++i) {
      if (hi[j][i] < lo[j][i]) {
        if (lo[j][i] - hi[j][i] > repair_tol) return std::nullopt;
        const double mid = 0.5 * (lo[j][i] + hi[j][i]);
        lo[j][i] = hi[j][i] = mid;
      }
    }
  }
  // Outward nesting pass: inner violations within tolerance get clamped to
  // the enclosing cut's endpoint.
  for (std::size_t j = 1; j < cuts.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (lo[j][i] < lo[j - 1][i]) {
        if (lo[j - 1][i] - lo[j][i] > repair_tol) return std::nullopt;
        lo[j][i] = lo[j - 1][i];
      }
      if (hi[j][i] > hi[j - 1][i]) {
        if (hi[j][i] - hi[j - 1][i] > repair_tol) return std::nullopt;
        hi[j][i] = hi[j - 1][i];
      }
      if (hi[j][i] < lo[j][i]) {
        if (lo[j][i] - hi[j][i] > repair_tol) return std::nullopt;
        const double mid = 0.5 * (lo[j][i] + hi[j][i]);
        // Clamping to the midpoint could undercut the enclosing box only by
        // amounts already inside the repair budget.
        lo[j][i] = hi[j][i] = std::clamp(mid, lo[j - 1][i], hi[j - 1][i]);
      }
    }
  }
  std::vector<Box> repaired;
  repaired.reserve(cuts.size());
  for (std::size_t j = 0; j < cuts.size(); ++j)
    repaired.emplace_back(std::move(lo[j]), std::move(hi[j]));
  return FuzzyBox(std::move(grid), std::move(repaired));
}

bool FuzzyBox::same_shape(const FuzzyBox& other) const {
  return grid_ == other.grid_ && dim() == other.dim();
}

namespace {

void require_same_shape(const FuzzyBox& u, const FuzzyBox& v, const char* op) {
  if (!u.same_shape(v)) {
    throw std::invalid_argument(std::string(op) +
                                ": operands must share grid and dimension");
  }
}

}  // namespace

FuzzyBox add(const FuzzyBox& u, const FuzzyBox& v) {
  require_same_shape(u, v, "add");
  const std::size_t n = u.dim();
  std::vector<Box> cuts;
  cuts.reserve(u.levels());
  for (std::size_t j = 0; j < u.levels(); ++j) {
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = u.cut(j).lo(i) + v.cut(j).lo(i);
      hi[i] = u.cut(j).hi(i) + v.cut(j).hi(i);
    }
    cuts.emplace_back(std::move(lo), std::move(hi));
  }
  return FuzzyBox(u.grid(), std::move(cuts));
}

FuzzyBox scale(double lambda, const FuzzyBox& u) {
  if (lambda == 0.0) return FuzzyBox::zero(u.grid(), u.dim());
  const std::size_t n = u.dim();
  std::vector<Box> cuts;
  cuts.reserve(u.levels());
  for (std::size_t j = 0; j < u.levels(); ++j) {
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = lambda * u.cut(j).lo(i);
      const double b = lambda * u.cut(j).hi(i);
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b);
    }
    cuts.emplace_back(std::move(lo), std::move(hi));
  }
  return FuzzyBox(u.grid(), std::move(cuts));
}

std::optional<FuzzyBox> h_difference(const FuzzyBox& x, const FuzzyBox& y) {
  require_same_shape(x, y, "h_difference");
  const std::size_t n = x.dim();
  std::vector<Box> cuts;
  cuts.reserve(x.levels());
  for (std::size_t j = 0; j < x.levels(); ++j) {
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = x.cut(j).lo(i) - y.cut(j).lo(i);
      hi[i] = x.cut(j).hi(i) - y.cut(j).hi(i);
      // Width deficit beyond the repair budget means x is genuinely
      // narrower than y at this level: no H-difference exists.
      if (hi[i] < lo[i] && lo[i] - hi[i] > FuzzyBox::kRepairTol)
        return std::nullopt;
    }
    // Defer inversion/nesting repair to try_from_cuts.
    for (std::size_t i = 0; i < n; ++i) {
      if (hi[i] < lo[i]) {
        const double mid = 0.5 * (lo[i] + hi[i]);
        lo[i] = hi[i] = mid;
      }
    }
    cuts.emplace_back(std::move(lo), std::move(hi));
  }
  return FuzzyBox::try_from_cuts(x.grid(), std::move(cuts));
}

double sup_metric(const FuzzyBox& u, const FuzzyBox& v) {
  require_same_shape(u, v, "sup_metric");
  double d = 0.0;
  for (std::size_t j = 0; j < u.levels(); ++j)
    d = std::max(d, box_hausdorff(u.cut(j), v.cut(j)));
  return d;
}

double sup_metric_to_zero(const FuzzyBox& u) {
  double d = 0.0;
  for (std::size_t j = 0; j < u.levels(); ++j) {
    for (std::size_t i = 0; i < u.dim(); ++i) {
      d = std::max(d, std::abs(u.cut(j).lo(i)));
      d = std::max(d, std::abs(u.cut(j).hi(i)));
    }
  }
  return d;
}

std::vector<double> diameter(const FuzzyBox& u, std::size_t level) {
  if (level >= u.levels())
    throw std::out_of_range("diameter: level index out of range");
  std::vector<double> w(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) w[i] = u.cut(level).width(i);
  return w;
}

FuzzyBox resample(const FuzzyBox& u, const LevelGrid& target) {
  std::vector<Box> cuts;
  cuts.reserve(target.size());
  const auto& src = u.grid();
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double a = target.alpha(j);
    std::size_t pick = 0;
    while (pick + 1 < src.size() && src.alpha(pick + 1) <= a) ++pick;
    cuts.push_back(u.cut(pick));
  }
  return FuzzyBox(target, std::move(cuts));
}

}  // namespace fuzzydyn
