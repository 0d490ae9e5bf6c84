#include "submax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace submax {

namespace {

// Max of sum(x_i^2) subject to sum(x_i) <= t, 0 <= x <= 1, over n coords:
// fill floor(t) coordinates at 1 and one at the fractional remainder.
double squared_fill(double t, int n) {
  t = std::min(t, static_cast<double>(n));
  if (t <= 0.0) return 0.0;
  const double whole = std::floor(t);
  const double frac = t - whole;
  return whole + frac * frac;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kBox: return "box";
    case Family::kScaledSimplex: return "scaled_simplex";
    case Family::kUniformMatroid: return "uniform_matroid";
    case Family::kPartitionMatroid: return "partition_matroid";
  }
  return "unknown";
}

ConstraintSet ConstraintSet::box(Vec upper) {
  if (upper.size() < 1) throw std::invalid_argument("box: empty upper bound");
  if (!upper.allFinite() || (upper.array() <= 0.0).any()) {
    throw std::invalid_argument("box: upper bounds must be finite and > 0");
  }
  ConstraintSet s;
  s.family_ = Family::kBox;
  s.dim_ = static_cast<int>(upper.size());
  s.upper_ = std::move(upper);
  return s;
}

ConstraintSet ConstraintSet::scaled_simplex(double budget, int dim) {
  if (dim < 1) throw std::invalid_argument("scaled_simplex: dim must be >= 1");
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("scaled_simplex: budget must be finite and > 0");
  }
  ConstraintSet s;
  s.family_ = Family::kScaledSimplex;
  s.dim_ = dim;
  s.budget_ = budget;
  return s;
}

ConstraintSet ConstraintSet::uniform_matroid(int rank, int dim) {
  if (dim < 1) throw std::invalid_argument("uniform_matroid: dim must be >= 1");
  if (rank < 1 || rank > dim) {
    throw std::invalid_argument("uniform_matroid: rank must be in [1, dim]");
  }
  ConstraintSet s;
  s.family_ = Family::kUniformMatroid;
  s.dim_ = dim;
  s.rank_ = rank;
  return s;
}

ConstraintSet ConstraintSet::partition_matroid(std::vector<int> part_of,
                                               std::vector<int> caps) {
  if (part_of.empty()) {
    throw std::invalid_argument("partition_matroid: empty ground set");
  }
  const int nparts = static_cast<int>(caps.size());
  if (nparts < 1) throw std::invalid_argument("partition_matroid: no parts");
  std::vector<int> sizes(nparts, 0);
  for (int p : part_of) {
    if (p < 0 || p >= nparts) {
      throw std::invalid_argument("partition_matroid: part index out of range");
    }
    ++sizes[p];
  }
  for (int p = 0; p < nparts; ++p) {
    if (sizes[p] == 0) {
      throw std::invalid_argument("partition_matroid: empty part " +
                                  std::to_string(p));
    }
    if (caps[p] < 1) {
      throw std::invalid_argument("partition_matroid: caps must be >= 1");
    }
  }
  ConstraintSet s;
  s.family_ = Family::kPartitionMatroid;
  s.dim_ = static_cast<int>(part_of.size());
  s.part_of_ = std::move(part_of);
  s.caps_ = std::move(caps);
  return s;
}

const Vec& ConstraintSet::box_upper() const {
  if (family_ != Family::kBox) throw std::logic_error("not a box");
  return upper_;
}

double ConstraintSet::simplex_budget() const {
  if (family_ != Family::kScaledSimplex) {
    throw std::logic_error("not a scaled simplex");
  }
  return budget_;
}

int ConstraintSet::matroid_rank() const {
  if (family_ != Family::kUniformMatroid) {
    throw std::logic_error("not a uniform matroid polytope");
  }
  return rank_;
}

const std::vector<int>& ConstraintSet::part_of() const {
  if (family_ != Family::kPartitionMatroid) {
    throw std::logic_error("not a partition matroid polytope");
  }
  return part_of_;
}

const std::vector<int>& ConstraintSet::caps() const {
  if (family_ != Family::kPartitionMatroid) {
    throw std::logic_error("not a partition matroid polytope");
  }
  return caps_;
}

Vec ConstraintSet::lmo(const Vec& direction) const {
  check_dim(*this, direction, "lmo");
  Vec v = Vec::Zero(dim_);
  switch (family_) {
    case Family::kBox: {
      for (int i = 0; i < dim_; ++i) {
        if (direction[i] > 0.0) v[i] = upper_[i];
      }
      return v;
    }
    case Family::kScaledSimplex: {
      // Greedy fill by descending direction, one unit per coordinate.
      std::vector<int> order(dim_);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (direction[a] != direction[b]) return direction[a] > direction[b];
        return a < b;
      });
      double remaining = budget_;
      for (int i : order) {
        if (direction[i] <= 0.0 || remaining <= 0.0) break;
        const double take = std::min(1.0, remaining);
        v[i] = take;
        remaining -= take;
      }
      return v;
    }
    case Family::kUniformMatroid: {
      std::vector<int> order(dim_);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (direction[a] != direction[b]) return direction[a] > direction[b];
        return a < b;
      });
      int taken = 0;
      for (int i : order) {
        if (direction[i] <= 0.0 || taken == rank_) break;
        v[i] = 1.0;
        ++taken;
      }
      return v;
    }
    case Family::kPartitionMatroid: {
      const int nparts = static_cast<int>(caps_.size());
      std::vector<std::vector<int>> members(nparts);
      for (int i = 0; i < dim_; ++i) members[part_of_[i]].push_back(i);
      for (int p = 0; p < nparts; ++p) {
        auto& idx = members[p];
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
          if (direction[a] != direction[b]) return direction[a] > direction[b];
          return a < b;
        });
        int taken = 0;
        for (int i : idx) {
          if (direction[i] <= 0.0 || taken == caps_[p]) break;
          v[i] = 1.0;
          ++taken;
        }
      }
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

bool ConstraintSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x, "contains");
  if (tol < 0.0) throw std::invalid_argument("contains: tol must be >= 0");
  if (!x.allFinite()) return false;
  switch (family_) {
    case Family::kBox:
      return (x.array() >= -tol).all() &&
             (x.array() <= upper_.array() + tol).all();
    case Family::kScaledSimplex:
      return (x.array() >= -tol).all() && (x.array() <= 1.0 + tol).all() &&
             x.sum() <= budget_ + tol;
    case Family::kUniformMatroid:
      return (x.array() >= -tol).all() && (x.array() <= 1.0 + tol).all() &&
             x.sum() <= static_cast<double>(rank_) + tol;
    case Family::kPartitionMatroid: {
      if (!((x.array() >= -tol).all() && (x.array() <= 1.0 + tol).all())) {
        return false;
      }
      std::vector<double> sums(caps_.size(), 0.0);
      for (int i = 0; i < dim_; ++i) sums[part_of_[i]] += x[i];
      for (std::size_t p = 0; p < caps_.size(); ++p) {
        if (sums[p] > static_cast<double>(caps_[p]) + tol) return false;
      }
      return true;
    }
  }
  throw std::logic_error("unreachable");
}

RegionBounds ConstraintSet::bounds() const {
  RegionBounds b;
  b.lower = Vec::Zero(dim_);
  switch (family_) {
    case Family::kBox:
      b.radius = upper_.norm();
      b.diameter = b.radius;
      return b;
    case Family::kScaledSimplex: {
      b.radius = std::sqrt(squared_fill(budget_, dim_));
      // Opposing mass on disjoint coordinate blocks; scan every split.
      double best = 0.0;
      for (int a = 0; a <= dim_; ++a) {
        best = std::max(best, squared_fill(budget_, a) +
                                  squared_fill(budget_, dim_ - a));
      }
      b.diameter = std::sqrt(best);
      return b;
    }
    case Family::kUniformMatroid:
      b.radius = std::sqrt(static_cast<double>(rank_));
      b.diameter = std::sqrt(static_cast<double>(std::min(2 * rank_, dim_)));
      return b;
    case Family::kPartitionMatroid: {
      std::vector<int> sizes(caps_.size(), 0);
      for (int p : part_of_) ++sizes[p];
      double r2 = 0.0, d2 = 0.0;
      for (std::size_t p = 0; p < caps_.size(); ++p) {
        const int c = std::min(caps_[p], sizes[p]);
        r2 += c;
        d2 += std::min(2 * c, sizes[p]);
      }
      b.radius = std::sqrt(r2);
      b.diameter = std::sqrt(d2);
      return b;
    }
  }
  throw std::logic_error("unreachable");
}

double ConstraintSet::inscribed_orthant_radius() const {
  const double sqrt_d = std::sqrt(static_cast<double>(dim_));
  switch (family_) {
    case Family::kBox:
      return upper_.minCoeff();
    case Family::kScaledSimplex:
      return std::min(budget_ / sqrt_d, 1.0);
    case Family::kUniformMatroid:
      return std::min(1.0, static_cast<double>(rank_) / sqrt_d);
    case Family::kPartitionMatroid: {
      std::vector<int> sizes(caps_.size(), 0);
      for (int p : part_of_) ++sizes[p];
      double r = 1.0;
      for (std::size_t p = 0; p < caps_.size(); ++p) {
        r = std::min(r, static_cast<double>(caps_[p]) /
                            std::sqrt(static_cast<double>(sizes[p])));
      }
      return r;
    }
  }
  throw std::logic_error("unreachable");
}

InteriorSet::InteriorSet(ConstraintSet base, double delta)
    : base_(std::move(base)), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("InteriorSet: delta must be finite and > 0");
  }
  const double r = base_.inscribed_orthant_radius();
  alpha_ = (std::sqrt(static_cast<double>(base_.dim())) + 1.0) * delta / r;
  if (alpha_ >= 1.0) {
    throw std::invalid_argument("delta too large for set");
  }
}

Vec InteriorSet::lmo(const Vec& direction) const {
  check_dim(*this, direction, "lmo");
  return (1.0 - alpha_) * base_.lmo(direction) +
         Vec::Constant(dim(), delta_);
}

bool InteriorSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x, "contains");
  const Vec pulled =
      (x - Vec::Constant(dim(), delta_)) / (1.0 - alpha_);
  return base_.contains(pulled, tol);
}

RegionBounds InteriorSet::bounds() const {
  RegionBounds b = base_.bounds();
  b.lower = lower_bound();
  return b;
}

Vec InteriorSet::lower_bound() const {
  return Vec::Constant(dim(), delta_);
}

double InteriorSet::discrepancy_bound() const {
  const RegionBounds b = base_.bounds();
  const double r = base_.inscribed_orthant_radius();
  const double sqrt_d = std::sqrt(static_cast<double>(dim()));
  return (sqrt_d * (b.radius / r + 1.0) + b.radius / r) * delta_;
}

InteriorSet shrink_interior(const ConstraintSet& set, double delta) {
  return InteriorSet(set, delta);
}

}  // namespace submax
