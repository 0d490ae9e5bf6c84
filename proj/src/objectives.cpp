#include "submax/objectives.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace submax {

namespace {

void check_unit_cube(const Vec& x, int d, const char* what) {
  if (x.size() != d) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
  if ((x.array() < -1e-12).any() || (x.array() > 1.0 + 1e-12).any()) {
    throw std::invalid_argument(std::string(what) +
                                ": point outside the unit cube");
  }
}

}  // namespace

QuadraticDR::QuadraticDR(Vec h, Mat H, Vec box_upper, double sigma0)
    : h_(std::move(h)), H_(std::move(H)), box_upper_(std::move(box_upper)),
      sigma0_(sigma0) {
  const int d = static_cast<int>(h_.size());
  if (H_.rows() != d || H_.cols() != d || box_upper_.size() != d) {
    throw std::invalid_argument("QuadraticDR: inconsistent dimensions");
  }
  if (!H_.isApprox(H_.transpose(), 1e-12)) {
    throw std::invalid_argument("QuadraticDR: H must be symmetric");
  }
  if ((H_.array() > 0.0).any()) {
    throw std::invalid_argument("QuadraticDR: H entries must be <= 0");
  }
  if ((h_.array() < 0.0).any()) {
    throw std::invalid_argument("QuadraticDR: h must be nonnegative");
  }
  if (sigma0_ < 0.0) {
    throw std::invalid_argument("QuadraticDR: sigma0 must be >= 0");
  }
  // Monotonicity floor: grad(x) = h + Hx >= h + H u for x in the box, so
  // raising h_i to -(H u)_i makes the gradient nonnegative everywhere.
  const Vec hu = H_ * box_upper_;
  for (int i = 0; i < d; ++i) h_[i] = std::max(h_[i], -hu[i]);

  l1_ = h_.norm();  // grad ranges in [h + Hu, h] componentwise, both >= 0
  Eigen::SelfAdjointEigenSolver<Mat> es(H_);
  l2_ = es.eigenvalues().cwiseAbs().maxCoeff();
  m1_ = h_.dot(box_upper_) + 0.5 * box_upper_.dot(H_ * box_upper_);
}

QuadraticDR QuadraticDR::random(int d, const Vec& box_upper, double sigma0,
                                Rng& rng) {
  Mat H(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = -rng.uniform01() / d;
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  Vec h(d);
  for (int i = 0; i < d; ++i) h[i] = rng.uniform01();
  return QuadraticDR(std::move(h), std::move(H), box_upper, sigma0);
}

QuadraticDR QuadraticDR::linear(Vec c, Vec box_upper) {
  const int d = static_cast<int>(c.size());
  return QuadraticDR(std::move(c), Mat::Zero(d, d), std::move(box_upper));
}

void QuadraticDR::check_domain(const Vec& x) const {
  if (x.size() != h_.size()) {
    throw std::invalid_argument("QuadraticDR: dimension mismatch");
  }
  if ((x.array() < -1e-9).any() ||
      (x.array() > box_upper_.array() + 1e-9).any()) {
    throw std::invalid_argument("QuadraticDR: point outside the domain box");
  }
}

double QuadraticDR::value(const Vec& x) const {
  check_domain(x);
  return h_.dot(x) + 0.5 * x.dot(H_ * x);
}

Vec QuadraticDR::grad(const Vec& x) const {
  check_domain(x);
  return h_ + H_ * x;
}

Vec QuadraticDR::stoch_grad(const Vec& x, Rng& rng) const {
  Vec g = grad(x);
  if (sigma0_ == 0.0) return g;
  const int d = dim();
  // Uniform in the sigma0-ball: Gaussian direction, radius U^(1/d).
  Vec eps(d);
  for (int i = 0; i < d; ++i) eps[i] = rng.normal();
  const double nrm = eps.norm();
  if (nrm > 0.0) {
    const double radius =
        sigma0_ * std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
    eps *= radius / nrm;
  }
  g += eps;
  const double bound = stoch_grad_bound();
  const double gn = g.norm();
  if (gn > bound) g *= bound / gn;  // safety clip; unreachable for this noise
  return g;
}

CoverageObjective::CoverageObjective(std::vector<std::uint64_t> covers,
                                     std::vector<double> weights)
    : covers_(std::move(covers)), weights_(std::move(weights)) {
  if (covers_.empty() || covers_.size() > 63) {
    throw std::invalid_argument("coverage: ground set size must be in [1,63]");
  }
  if (weights_.empty() || weights_.size() > 64) {
    throw std::invalid_argument("coverage: universe size must be in [1,64]");
  }
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("coverage: weights must be >= 0");
  }
  total_weight_ = 0.0;
  for (double w : weights_) total_weight_ += w;
}

double CoverageObjective::value(std::uint64_t mask) const {
  std::uint64_t covered = 0;
  for (std::size_t i = 0; i < covers_.size(); ++i) {
    if (mask & (1ULL << i)) covered |= covers_[i];
  }
  double total = 0.0;
  while (covered) {
    const int e = std::countr_zero(covered);
    total += weights_[e];
    covered &= covered - 1;
  }
  return total;
}

FacilityLocationObjective::FacilityLocationObjective(Mat v) : v_(std::move(v)) {
  if (v_.rows() < 1 || v_.rows() > 63 || v_.cols() < 1) {
    throw std::invalid_argument("facility_location: bad dimensions");
  }
  if ((v_.array() < 0.0).any()) {
    throw std::invalid_argument("facility_location: scores must be >= 0");
  }
  m1_ = v_.colwise().maxCoeff().sum();
}

double FacilityLocationObjective::value(std::uint64_t mask) const {
  if (mask == 0) return 0.0;
  double total = 0.0;
  for (int j = 0; j < v_.cols(); ++j) {
    double best = 0.0;
    for (int i = 0; i < v_.rows(); ++i) {
      if (mask & (1ULL << i)) best = std::max(best, v_(i, j));
    }
    total += best;
  }
  return total;
}

ModularObjective::ModularObjective(Vec weights) : w_(std::move(weights)) {
  if (w_.size() < 1 || w_.size() > 63) {
    throw std::invalid_argument("modular: ground set size must be in [1,63]");
  }
  if ((w_.array() < 0.0).any()) {
    throw std::invalid_argument("modular: weights must be >= 0");
  }
}

double ModularObjective::value(std::uint64_t mask) const {
  double total = 0.0;
  while (mask) {
    total += w_[std::countr_zero(mask)];
    mask &= mask - 1;
  }
  return total;
}

TableObjective::TableObjective(int d, std::vector<double> table)
    : d_(d), table_(std::move(table)) {
  if (d < 1 || d > 20 || table_.size() != (1ULL << d)) {
    throw std::invalid_argument("table objective: need 2^d entries, d <= 20");
  }
  m1_ = 0.0;
  for (double v : table_) m1_ = std::max(m1_, std::abs(v));
}

SetObjectivePtr make_random_set_objective(SetObjectiveKind kind, int d,
                                          int universe_size, Rng& rng) {
  if (d < 1 || d > 63) {
    throw std::invalid_argument("make_random_set_objective: d must be in [1,63]");
  }
  switch (kind) {
    case SetObjectiveKind::kCoverage: {
      if (universe_size < 1 || universe_size > 64) {
        throw std::invalid_argument(
            "make_random_set_objective: universe size must be in [1,64]");
      }
      std::vector<double> weights(universe_size);
      for (auto& w : weights) w = rng.uniform01();
      std::vector<std::uint64_t> covers(d, 0);
      for (int i = 0; i < d; ++i) {
        // Each item covers roughly a quarter of the universe, and at least
        // one element so no item is vacuous.
        for (int e = 0; e < universe_size; ++e) {
          if (rng.uniform01() < 0.25) covers[i] |= (1ULL << e);
        }
        if (covers[i] == 0) covers[i] |= (1ULL << rng.below(universe_size));
      }
      return std::make_shared<CoverageObjective>(std::move(covers),
                                                 std::move(weights));
    }
    case SetObjectiveKind::kFacilityLocation: {
      if (universe_size < 1) {
        throw std::invalid_argument(
            "make_random_set_objective: universe size must be >= 1");
      }
      Mat v(d, universe_size);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < universe_size; ++j) v(i, j) = rng.uniform01();
      }
      return std::make_shared<FacilityLocationObjective>(std::move(v));
    }
  }
  throw std::logic_error("unreachable");
}

MultilinearExtension::MultilinearExtension(SetObjectivePtr f)
    : f_(std::move(f)) {
  if (!f_) throw std::invalid_argument("MultilinearExtension: null objective");
  if (f_->dim() > 20) {
    throw std::invalid_argument(
        "MultilinearExtension: exact enumeration limited to d <= 20; use the "
        "Monte-Carlo estimators for larger ground sets");
  }
  std::tie(l1_, l2_) =
      lipschitz_smoothness_of_extension(f_->value_bound(), f_->dim());
}

double MultilinearExtension::value(const Vec& x) const {
  const int d = dim();
  check_unit_cube(x, d, "multilinear_value");
  // Fold coordinates one at a time: table[S] over remaining coordinates is
  // the conditional expectation given the first ones integrated out.
  std::vector<double> table(1ULL << d);
  for (std::uint64_t s = 0; s < table.size(); ++s) table[s] = f_->value(s);
  std::size_t half = table.size() >> 1;
  for (int i = d - 1; i >= 0; --i, half >>= 1) {
    const std::uint64_t bit = 1ULL << i;
    for (std::uint64_t s = 0; s < half; ++s) {
      // s indexes subsets of the remaining low coordinates, but table is
      // laid out by full masks; fold the top coordinate of the live block.
      table[s] = (1.0 - x[i]) * table[s] + x[i] * table[s | bit];
    }
  }
  return table[0];
}

Vec MultilinearExtension::grad(const Vec& x) const {
  const int d = dim();
  check_unit_cube(x, d, "multilinear_grad");
  // dF/dx_i = F(x; x_i <- 1) - F(x; x_i <- 0): one pinned evaluation pair
  // per coordinate, sharing a single pass over all subsets.
  Vec g = Vec::Zero(d);
  const std::uint64_t n = 1ULL << d;
  for (std::uint64_t s = 0; s < n; ++s) {
    const double fs = f_->value(s);
    if (fs == 0.0) continue;
    double p = 1.0;
    for (int j = 0; j < d; ++j) {
      p *= (s & (1ULL << j)) ? x[j] : (1.0 - x[j]);
    }
    if (p == 0.0) {
      // Rebuild per-coordinate leave-one-out products only when needed.
      for (int i = 0; i < d; ++i) {
        double q = 1.0;
        for (int j = 0; j < d; ++j) {
          if (j == i) continue;
          q *= (s & (1ULL << j)) ? x[j] : (1.0 - x[j]);
          if (q == 0.0) break;
        }
        if (q != 0.0) g[i] += ((s & (1ULL << i)) ? 1.0 : -1.0) * fs * q;
      }
      continue;
    }
    for (int i = 0; i < d; ++i) {
      const double pi = (s & (1ULL << i)) ? x[i] : (1.0 - x[i]);
      g[i] += ((s & (1ULL << i)) ? 1.0 : -1.0) * fs * (p / pi);
    }
  }
  return g;
}

Vec MultilinearExtension::stoch_grad(const Vec& x, Rng& rng) const {
  return multilinear_stoch_grad(*f_, x, rng);
}

double MultilinearExtension::stoch_grad_bound() const {
  return 2.0 * f_->value_bound() * std::sqrt(static_cast<double>(dim()));
}

double MultilinearExtension::noise_variance() const {
  // Marginals lie in [-M1, M1] per coordinate; crude but uniform bound.
  const double b = stoch_grad_bound();
  return b * b;
}

std::uint64_t sample_subset(const Vec& x, Rng& rng) {
  std::uint64_t s = 0;
  for (int i = 0; i < x.size(); ++i) {
    if (rng.uniform01() < x[i]) s |= (1ULL << i);
  }
  return s;
}

Vec multilinear_stoch_grad(const SetObjective& f, const Vec& x, Rng& rng) {
  const int d = f.dim();
  check_unit_cube(x, d, "multilinear_stoch_grad");
  const std::uint64_t s = sample_subset(x, rng);
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    const std::uint64_t bit = 1ULL << i;
    g[i] = f.value(s | bit) - f.value(s & ~bit);
  }
  return g;
}

McEstimate multilinear_value_mc(const SetObjective& f, const Vec& x, int n,
                                Rng& rng) {
  check_unit_cube(x, f.dim(), "multilinear_value_mc");
  if (n < 1) throw std::invalid_argument("multilinear_value_mc: n must be >= 1");
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double v = f.value(sample_subset(x, rng));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return McEstimate{mean, std::sqrt(var / n)};
}

Vec multilinear_grad_mc(const SetObjective& f, const Vec& x, int n, Rng& rng) {
  const int d = f.dim();
  check_unit_cube(x, d, "multilinear_grad_mc");
  if (n < 1) throw std::invalid_argument("multilinear_grad_mc: n must be >= 1");
  Vec g = Vec::Zero(d);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t s = sample_subset(x, rng);
    for (int i = 0; i < d; ++i) {
      const std::uint64_t bit = 1ULL << i;
      g[i] += f.value(s | bit) - f.value(s & ~bit);
    }
  }
  return g / static_cast<double>(n);
}

std::pair<double, double> lipschitz_smoothness_of_extension(double m1, int d) {
  if (m1 < 0.0 || d < 1) {
    throw std::invalid_argument("lipschitz_smoothness_of_extension: bad args");
  }
  const double dd = static_cast<double>(d);
  return {2.0 * m1 * std::sqrt(dd), 4.0 * m1 * std::sqrt(dd * (dd - 1.0))};
}

}  // namespace submax
