#include "submax/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace submax {

Vec sphere_sample(Rng& rng, int d) {
  if (d < 1) throw std::invalid_argument("sphere_sample: d must be >= 1");
  Vec u(d);
  double norm2;
  do {
    for (int i = 0; i < d; ++i) u[i] = rng.normal();
    norm2 = u.squaredNorm();
  } while (norm2 == 0.0);
  return u / std::sqrt(norm2);
}

Vec ball_sample(Rng& rng, int d) {
  Vec u = sphere_sample(rng, d);
  const double radius = std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
  return radius * u;
}

double smoothed_value(const std::function<double(const Vec&)>& value,
                      const Vec& x, const SmoothingSpec& spec, int n,
                      Rng& rng) {
  if (spec.delta <= 0.0) {
    throw std::invalid_argument("smoothed_value: delta must be > 0");
  }
  if (x.size() != spec.dim) {
    throw std::invalid_argument("smoothed_value: dimension mismatch");
  }
  if (n < 1) throw std::invalid_argument("smoothed_value: n must be >= 1");
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += value(x + spec.delta * ball_sample(rng, spec.dim));
  }
  return sum / n;
}

OnePointSample one_point_grad(
    const std::function<double(const Vec&)>& value_at_played_point,
    const Vec& x, const SmoothingSpec& spec, Rng& rng) {
  if (spec.delta <= 0.0) {
    throw std::invalid_argument("one_point_grad: delta must be > 0");
  }
  if (x.size() != spec.dim) {
    throw std::invalid_argument("one_point_grad: dimension mismatch");
  }
  OnePointSample s;
  s.direction = sphere_sample(rng, spec.dim);
  s.probe = x + spec.delta * s.direction;
  s.observed = value_at_played_point(s.probe);
  s.grad_estimate =
      (static_cast<double>(spec.dim) / spec.delta) * s.observed * s.direction;
  return s;
}

MomentumEstimate MomentumEstimate::zero(int dim) {
  return MomentumEstimate{Vec::Zero(dim), 0};
}

MomentumEstimate momentum_update(const MomentumEstimate& prev, const Vec& g,
                                 double rho) {
  if (!(rho > 0.0) || rho > 1.0) {
    throw std::invalid_argument("momentum_update: rho must be in (0, 1]");
  }
  if (g.size() != prev.d_vec.size()) {
    throw std::invalid_argument("momentum_update: dimension mismatch");
  }
  return MomentumEstimate{(1.0 - rho) * prev.d_vec + rho * g, prev.k + 1};
}

double rho_schedule_mono(long k, long K) {
  if (K % 2 != 0) {
    throw std::invalid_argument("rho_schedule_mono: K must be even");
  }
  if (k < 1 || k > K) {
    throw std::invalid_argument("rho_schedule_mono: k must be in [1, K]");
  }
  if (k <= K / 2 + 1) {
    return 2.0 / std::pow(static_cast<double>(k + 3), 2.0 / 3.0);
  }
  return 1.5 / std::pow(static_cast<double>(K - k + 2), 2.0 / 3.0);
}

double rho_schedule_bandit(long k) {
  if (k < 1) throw std::invalid_argument("rho_schedule_bandit: k must be >= 1");
  return 2.0 / std::pow(static_cast<double>(k + 2), 2.0 / 3.0);
}

}  // namespace submax
