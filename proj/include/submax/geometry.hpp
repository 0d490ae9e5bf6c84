#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace submax {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Default absolute tolerance on each defining inequality of a membership
// test; absorbs drift from O(T) accumulated convex combinations.
inline constexpr double kMembershipTol = 1e-9;

struct RegionBounds {
  double diameter;  // D = sup ||x - y||
  double radius;    // R = sup ||x||
  Vec lower;        // lower bound point (origin, or delta*1 for interiors)
};

// Common surface of a feasible region: linear maximization, membership,
// and the norm bounds the algorithms' schedules consume. All implementations
// are immutable after construction and safe to share across threads.
class FeasibleRegion {
 public:
  virtual ~FeasibleRegion() = default;
  virtual int dim() const = 0;
  // argmax_{v in region} <v, direction>; returns an extreme point (or the
  // affine image of one for interior sets).
  virtual Vec lmo(const Vec& direction) const = 0;
  virtual bool contains(const Vec& x, double tol = kMembershipTol) const = 0;
  virtual RegionBounds bounds() const = 0;
  virtual Vec lower_bound() const = 0;
};

enum class Family { kBox, kScaledSimplex, kUniformMatroid, kPartitionMatroid };

std::string family_name(Family f);

// Down-closed convex body from one of the structured families. All of them
// contain the origin, are compact, and admit exact closed-form membership,
// greedy LMOs, and analytic inscribed/circumscribed radii.
class ConstraintSet final : public FeasibleRegion {
 public:
  static ConstraintSet box(Vec upper);
  static ConstraintSet scaled_simplex(double budget, int dim);
  static ConstraintSet uniform_matroid(int rank, int dim);
  // part_of[i] in [0, #parts) assigns coordinate i to a part; caps per part.
  static ConstraintSet partition_matroid(std::vector<int> part_of,
                                         std::vector<int> caps);

  Family family() const { return family_; }
  int dim() const override { return dim_; }

  Vec lmo(const Vec& direction) const override;
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  RegionBounds bounds() const override;
  Vec lower_bound() const override { return Vec::Zero(dim_); }

  // Largest r with r * (B^d intersected with the nonnegative orthant)
  // contained in the set; exact analytic value per family.
  double inscribed_orthant_radius() const;

  // Family data accessors (only valid for the matching family).
  const Vec& box_upper() const;
  double simplex_budget() const;
  int matroid_rank() const;
  const std::vector<int>& part_of() const;
  const std::vector<int>& caps() const;

 private:
  ConstraintSet() = default;

  Family family_{Family::kBox};
  int dim_{0};
  Vec upper_;                 // box
  double budget_{0.0};        // scaled simplex
  int rank_{0};               // uniform matroid
  std::vector<int> part_of_;  // partition matroid
  std::vector<int> caps_;
};

// The shrink-and-translate interior K' = (1-alpha) K + delta * 1 with
// alpha = (sqrt(d)+1) * delta / r. Every member keeps a full delta-ball
// inside the base set, so one-point probes x + delta*u stay feasible.
class InteriorSet final : public FeasibleRegion {
 public:
  InteriorSet(ConstraintSet base, double delta);

  int dim() const override { return base_.dim(); }
  Vec lmo(const Vec& direction) const override;
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  // Base D and R remain valid upper bounds for the interior.
  RegionBounds bounds() const override;
  Vec lower_bound() const override;

  const ConstraintSet& base() const { return base_; }
  double delta() const { return delta_; }
  double alpha() const { return alpha_; }

  // Upper bound on the Hausdorff-style discrepancy d(K, K'):
  // [sqrt(d) (R/r + 1) + R/r] * delta.
  double discrepancy_bound() const;

 private:
  ConstraintSet base_;
  double delta_;
  double alpha_;
};

InteriorSet shrink_interior(const ConstraintSet& set, double delta);

inline void check_dim(const FeasibleRegion& region, const Vec& x,
                      const char* what) {
  if (x.size() != region.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(region.dim()) + ")");
  }
}

}  // namespace submax
