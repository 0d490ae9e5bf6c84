#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "submax/geometry.hpp"
#include "submax/rng.hpp"

namespace submax {

// Monotone continuous DR-submodular objective with exact and stochastic
// gradient access plus the norm/smoothness constants the schedules need.
class ContinuousObjective {
 public:
  virtual ~ContinuousObjective() = default;
  virtual int dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual Vec grad(const Vec& x) const = 0;
  // Unbiased, with ||stoch_grad|| <= stoch_grad_bound() deterministically.
  virtual Vec stoch_grad(const Vec& x, Rng& rng) const { return grad(x); }

  virtual double lipschitz() const = 0;         // L1
  virtual double smoothness() const = 0;        // L2
  virtual double value_bound() const = 0;       // M1 = sup |F| on the domain
  virtual double stoch_grad_bound() const { return lipschitz(); }  // M0
  virtual double noise_variance() const { return 0.0; }            // sigma0^2
};

using ContinuousObjectivePtr = std::shared_ptr<ContinuousObjective>;

// F(x) = h'x + x'Hx/2 with h >= 0 and H symmetric nonpositive, so partial
// derivatives are nonincreasing in every coordinate. Monotonicity on the
// domain box is enforced constructively by flooring h at -(H u).
class QuadraticDR final : public ContinuousObjective {
 public:
  QuadraticDR(Vec h, Mat H, Vec box_upper, double sigma0 = 0.0);

  static QuadraticDR random(int d, const Vec& box_upper, double sigma0,
                            Rng& rng);
  static QuadraticDR linear(Vec c, Vec box_upper);

  int dim() const override { return static_cast<int>(h_.size()); }
  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  // Adds bounded zero-mean noise drawn uniformly from a sigma0-ball, so the
  // hard norm bound M0 = L1 + sigma0 holds deterministically.
  Vec stoch_grad(const Vec& x, Rng& rng) const override;

  double lipschitz() const override { return l1_; }
  double smoothness() const override { return l2_; }
  double value_bound() const override { return m1_; }
  double stoch_grad_bound() const override { return l1_ + sigma0_; }
  double noise_variance() const override { return sigma0_ * sigma0_; }

  const Vec& h() const { return h_; }
  const Mat& H() const { return H_; }
  const Vec& box_upper() const { return box_upper_; }

 private:
  void check_domain(const Vec& x) const;

  Vec h_;
  Mat H_;
  Vec box_upper_;
  double sigma0_;
  double l1_, l2_, m1_;
};

// Monotone submodular set function on ground set [d], d <= 63; subsets are
// bitmasks. value(S) >= 0 and value(empty) may be nonzero for some families.
class SetObjective {
 public:
  virtual ~SetObjective() = default;
  virtual int dim() const = 0;
  virtual double value(std::uint64_t mask) const = 0;
  virtual double value_bound() const = 0;  // M1 = sup |f|
};

using SetObjectivePtr = std::shared_ptr<SetObjective>;

// Weighted coverage: item i covers a subset of a weighted universe;
// f(S) = total weight covered by the union.
class CoverageObjective final : public SetObjective {
 public:
  CoverageObjective(std::vector<std::uint64_t> covers,
                    std::vector<double> weights);
  int dim() const override { return static_cast<int>(covers_.size()); }
  double value(std::uint64_t mask) const override;
  double value_bound() const override { return total_weight_; }

 private:
  std::vector<std::uint64_t> covers_;
  std::vector<double> weights_;
  double total_weight_;
};

// Facility location: f(S) = sum_j max_{i in S} v[i][j], f(empty) = 0.
class FacilityLocationObjective final : public SetObjective {
 public:
  explicit FacilityLocationObjective(Mat v);
  int dim() const override { return static_cast<int>(v_.rows()); }
  double value(std::uint64_t mask) const override;
  double value_bound() const override { return m1_; }

 private:
  Mat v_;  // d x n, nonnegative
  double m1_;
};

// Modular f(S) = sum_{i in S} w_i; the degenerate submodular family whose
// multilinear extension is linear.
class ModularObjective final : public SetObjective {
 public:
  explicit ModularObjective(Vec weights);
  int dim() const override { return static_cast<int>(w_.size()); }
  double value(std::uint64_t mask) const override;
  double value_bound() const override { return w_.sum(); }
  const Vec& weights() const { return w_; }

 private:
  Vec w_;
};

// Explicit 2^d table; used by the rounding demo and tests.
class TableObjective final : public SetObjective {
 public:
  TableObjective(int d, std::vector<double> table);
  int dim() const override { return d_; }
  double value(std::uint64_t mask) const override { return table_[mask]; }
  double value_bound() const override { return m1_; }

 private:
  int d_;
  std::vector<double> table_;
  double m1_;
};

enum class SetObjectiveKind { kCoverage, kFacilityLocation };

// Random monotone submodular instance of the requested family.
// Coverage: universe_size weighted elements, each item covers a random
// subset. Facility location: random nonnegative d x n score matrix.
SetObjectivePtr make_random_set_objective(SetObjectiveKind kind, int d,
                                          int universe_size, Rng& rng);

// Exact multilinear extension F(x) = E_{S~x}[f(S)] by enumeration; only
// available for d <= 20 (2^d terms). Monte-Carlo evaluation for larger d
// goes through the *_mc free functions below.
class MultilinearExtension final : public ContinuousObjective {
 public:
  explicit MultilinearExtension(SetObjectivePtr f);

  int dim() const override { return f_->dim(); }
  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  // Samples one S~x; component i is f(S + i) - f(S - i). Unbiased for
  // grad(x) with norm at most 2 M1 sqrt(d).
  Vec stoch_grad(const Vec& x, Rng& rng) const override;

  double lipschitz() const override { return l1_; }
  double smoothness() const override { return l2_; }
  double value_bound() const override { return f_->value_bound(); }
  double stoch_grad_bound() const override;
  double noise_variance() const override;

  const SetObjective& base() const { return *f_; }
  SetObjectivePtr base_ptr() const { return f_; }

 private:
  SetObjectivePtr f_;
  double l1_, l2_;
};

struct McEstimate {
  double mean;
  double std_error;
};

// Monte-Carlo multilinear extension estimates for any d; the caller owns the
// RNG per the concurrency contract.
McEstimate multilinear_value_mc(const SetObjective& f, const Vec& x, int n,
                                Rng& rng);
Vec multilinear_grad_mc(const SetObjective& f, const Vec& x, int n, Rng& rng);

Vec multilinear_stoch_grad(const SetObjective& f, const Vec& x, Rng& rng);

// Samples S ~ x (coordinate i included independently w.p. x_i).
std::uint64_t sample_subset(const Vec& x, Rng& rng);

// Lipschitz and smoothness constants of the multilinear extension of a set
// function with sup |f| <= M: (2 M sqrt(d), 4 M sqrt(d (d-1))).
std::pair<double, double> lipschitz_smoothness_of_extension(double m1, int d);

}  // namespace submax
