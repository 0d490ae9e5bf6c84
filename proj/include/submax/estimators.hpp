#pragma once

#include <functional>

#include "submax/geometry.hpp"
#include "submax/rng.hpp"

namespace submax {

// Uniform sample from the d-dimensional unit ball (Gaussian direction,
// radius U^(1/d); rejection-free).
Vec ball_sample(Rng& rng, int d);

// Uniform sample from the unit sphere S^(d-1); ||result|| = 1 up to rounding.
Vec sphere_sample(Rng& rng, int d);

struct SmoothingSpec {
  double delta;
  int dim;
};

// Monte-Carlo estimate of the delta-smoothed value
// E_{v ~ B^d}[F(x + delta v)] over n ball samples.
double smoothed_value(const std::function<double(const Vec&)>& value,
                      const Vec& x, const SmoothingSpec& spec, int n,
                      Rng& rng);

// One-point spherical gradient estimate of the smoothed function. The caller
// must play exactly `probe`; the estimate is only unbiased for the gradient
// of the smoothed function at x when the observed value comes from that
// point, so the probe is returned alongside the estimate.
struct OnePointSample {
  Vec grad_estimate;  // (d / delta) * observed * direction
  Vec probe;          // x + delta * direction, the point that was played
  Vec direction;      // u ~ S^(d-1)
  double observed;    // value returned by the callback at probe
};

OnePointSample one_point_grad(
    const std::function<double(const Vec&)>& value_at_played_point,
    const Vec& x, const SmoothingSpec& spec, Rng& rng);

struct MomentumEstimate {
  Vec d_vec;
  long k{0};

  static MomentumEstimate zero(int dim);
};

// d_new = (1 - rho) * prev + rho * g; requires rho in (0, 1].
MomentumEstimate momentum_update(const MomentumEstimate& prev, const Vec& g,
                                 double rho);

// Piecewise step schedule for the one-shot full-information algorithm:
// 2 / (k+3)^(2/3) up to K/2 + 1, then 1.5 / (K-k+2)^(2/3). K must be even.
double rho_schedule_mono(long k, long K);

// Bandit step schedule 2 / (k+2)^(2/3).
double rho_schedule_bandit(long k);

}  // namespace submax
