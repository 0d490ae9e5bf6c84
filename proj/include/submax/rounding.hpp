#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "submax/geometry.hpp"
#include "submax/objectives.hpp"
#include "submax/rng.hpp"

namespace submax {

// Uniform or partition matroid over ground set [d], d <= 63.
class Matroid {
 public:
  static Matroid uniform(int rank, int d);
  static Matroid partition(std::vector<int> part_of, std::vector<int> caps);

  int dim() const { return dim_; }
  bool is_uniform() const { return uniform_; }
  bool is_independent(std::uint64_t mask) const;

  // The matroid polytope conv{1_I : I independent} as a constraint set.
  ConstraintSet polytope() const;

 private:
  Matroid() = default;
  bool uniform_{true};
  int dim_{0};
  int rank_{0};
  std::vector<int> part_of_;
  std::vector<int> caps_;
};

// The matroid whose polytope is the given constraint set; only uniform and
// partition matroid polytopes qualify.
Matroid matroid_from_constraint(const ConstraintSet& set);

// Independent per-coordinate Bernoulli rounding; unbiased for the
// multilinear extension but may leave the matroid.
std::uint64_t random_round(const Vec& x, Rng& rng);

// Pairwise (pipage) rounding within the ground set (uniform) or within each
// part (partition). Output is always independent; for monotone submodular f,
// E[f(output)] >= F(x). The direction of each pairwise move is randomized
// with the expectation-preserving probabilities.
std::uint64_t pipage_round(const Vec& x, const Matroid& m, Rng& rng);

// Demonstration that no f-independent unbiased rounding scheme into
// I = {{}, {1}, {2}} exists on a two-element ground set: the two function
// families force incompatible per-set probabilities.
struct ImpossibilityReport {
  // Probability assignments p = (p_play_1, p_play_2) recovered by solving
  // the unbiasedness constraints at each sampled x, for both families.
  struct Sample {
    double x1, x2;
    double p1_family_a, p2_family_a;
    double p1_family_b, p2_family_b;
  };
  std::vector<Sample> samples;
  double max_residual_a;   // |p1 a + p2 b - F(x)| over sampled (a, b, x)
  double max_residual_b;
  double min_solution_gap;  // min |p1_a - p1_b| over interior samples
  std::string summary;
};

ImpossibilityReport impossibility_demo(int n_samples = 100,
                                       std::uint64_t seed = 7);

}  // namespace submax
