#include <doctest.h>

#include <cmath>
#include <vector>

#include "submax/estimators.hpp"
#include "submax/objectives.hpp"
#include "submax/rng.hpp"

using namespace submax;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<int>(v.size()));
  int i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

}  // namespace

TEST_CASE("rng streams are deterministic and decorrelated") {
  Rng a = Rng::stream(42, streams::kSphere, 3);
  Rng b = Rng::stream(42, streams::kSphere, 3);
  Rng c = Rng::stream(42, streams::kSphere, 4);
  bool all_equal = true, any_equal_c = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next(), vb = b.next(), vc = c.next();
    all_equal = all_equal && (va == vb);
    any_equal_c = any_equal_c || (va == vc);
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_c);

  Rng u(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform01();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    REQUIRE(u.below(17) < 17);
  }
}

TEST_CASE("sphere samples are unit vectors") {
  Rng rng(1);
  for (int d : {1, 2, 7, 20}) {
    for (int k = 0; k < 100; ++k) {
      CHECK(sphere_sample(rng, d).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-dimensional sphere samples are fair signs") {
  Rng rng(2);
  long plus = 0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const Vec u = sphere_sample(rng, 1);
    REQUIRE((u[0] == doctest::Approx(1.0) || u[0] == doctest::Approx(-1.0)));
    if (u[0] > 0) ++plus;
  }
  CHECK(std::abs(static_cast<double>(plus) / n - 0.5) < 0.02);
}

TEST_CASE("ball samples are centered and inside the ball") {
  Rng rng(3);
  const int d = 5, n = 100000;
  Vec mean = Vec::Zero(d);
  for (int k = 0; k < n; ++k) {
    const Vec v = ball_sample(rng, d);
    REQUIRE(v.norm() <= 1.0 + 1e-12);
    mean += v;
  }
  mean /= n;
  // Coordinate variance of a uniform ball sample is 1/(d+2).
  const double band = 4.0 * std::sqrt(1.0 / (d + 2.0) / n);
  for (int i = 0; i < d; ++i) {
    CHECK(std::abs(mean[i]) <= band);
  }
}

TEST_CASE("smoothing a linear function changes nothing") {
  Rng rng(4);
  const Vec c = vec({1.0, -2.0, 0.5});
  const auto value = [&](const Vec& x) { return c.dot(x); };
  const Vec x = vec({0.2, 0.4, 0.1});
  const int n = 50000;
  const double est = smoothed_value(value, x, {0.3, 3}, n, rng);
  const double band = 4.0 * c.norm() * 0.3 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(est - c.dot(x)) <= band);
}

TEST_CASE("smoothed values stay within the Lipschitz band") {
  Rng rng(5);
  const int n = 2000;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const QuadraticDR q =
        QuadraticDR::random(d, Vec::Constant(d, 3.0), 0.0, rng);
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(1.0, 2.0);
    const double delta = rng.uniform(0.01, 0.5);
    const double est = smoothed_value(
        [&](const Vec& p) { return q.value(p); }, x, {delta, d}, n, rng);
    const double l1_delta = q.lipschitz() * delta;
    // Each sample deviates from F(x) by at most L1 delta, so the MC mean
    // stays within L1 delta plus its own 4-sigma band.
    const double band =
        l1_delta * (1.0 + 4.0 / std::sqrt(static_cast<double>(n)));
    CAPTURE(trial);
    REQUIRE(std::abs(est - q.value(x)) <= band);
  }
}

TEST_CASE("vanishing smoothing radius recovers the function value") {
  Rng rng(6);
  const QuadraticDR q = QuadraticDR::random(3, Vec::Ones(3), 0.0, rng);
  const Vec x = vec({0.5, 0.5, 0.5});
  const double est = smoothed_value(
      [&](const Vec& p) { return q.value(p); }, x, {1e-8, 3}, 100, rng);
  CHECK(std::abs(est - q.value(x)) < 1e-6);
}

TEST_CASE("one-point estimator returns the exact probe it evaluated") {
  Rng rng(7);
  const Vec x = vec({0.4, 0.4});
  Vec seen;
  const OnePointSample s = one_point_grad(
      [&](const Vec& p) {
        seen = p;
        return 1.0 + p.sum();
      },
      x, {0.1, 2}, rng);
  CHECK((s.probe - seen).norm() == doctest::Approx(0.0));
  CHECK((s.probe - x).norm() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(s.direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.observed == doctest::Approx(1.0 + seen.sum()));
  CHECK((s.grad_estimate - (2.0 / 0.1) * s.observed * s.direction).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("one-point estimator has zero mean on constant functions") {
  Rng rng(8);
  const int d = 4, n = 100000;
  const double c = 3.0, delta = 0.2;
  Vec mean = Vec::Zero(d);
  Vec m2 = Vec::Zero(d);
  const Vec x = Vec::Constant(d, 0.5);
  for (int k = 0; k < n; ++k) {
    const OnePointSample s =
        one_point_grad([&](const Vec&) { return c; }, x, {delta, d}, rng);
    REQUIRE(s.grad_estimate.norm() <= d * c / delta + 1e-9);
    mean += s.grad_estimate;
    m2 += s.grad_estimate.cwiseProduct(s.grad_estimate);
  }
  mean /= n;
  for (int i = 0; i < d; ++i) {
    const double var = m2[i] / n - mean[i] * mean[i];
    REQUIRE(std::abs(mean[i]) <= 4.0 * std::sqrt(var / n));
  }
}

TEST_CASE("one-point estimator is unbiased for linear functions") {
  Rng rng(9);
  const int d = 3, n = 200000;
  const Vec c = vec({1.0, 2.0, 0.5});
  const double delta = 0.25;
  const Vec x = Vec::Constant(d, 1.0);
  Vec mean = Vec::Zero(d);
  Vec m2 = Vec::Zero(d);
  for (int k = 0; k < n; ++k) {
    const OnePointSample s = one_point_grad(
        [&](const Vec& p) { return c.dot(p); }, x, {delta, d}, rng);
    mean += s.grad_estimate;
    m2 += s.grad_estimate.cwiseProduct(s.grad_estimate);
  }
  mean /= n;
  for (int i = 0; i < d; ++i) {
    const double var = m2[i] / n - mean[i] * mean[i];
    REQUIRE(std::abs(mean[i] - c[i]) <= 4.0 * std::sqrt(var / n));
  }
}

TEST_CASE("momentum update arithmetic") {
  MomentumEstimate m = MomentumEstimate::zero(2);
  m = momentum_update(m, vec({1.0, 0.0}), 1.0);  // rho = 1 copies g
  CHECK((m.d_vec - vec({1.0, 0.0})).norm() == doctest::Approx(0.0));
  CHECK(m.k == 1);
  m = momentum_update(m, vec({0.0, 1.0}), 0.5);
  CHECK(m.d_vec[0] == doctest::Approx(0.5));
  CHECK(m.d_vec[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(momentum_update(m, vec({0.0, 0.0}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(momentum_update(m, vec({0.0, 0.0}), 1.5),
                  std::invalid_argument);
}

TEST_CASE("momentum converges geometrically under a constant input") {
  const Vec g = vec({2.0, -1.0, 0.5});
  const double rho = 0.3;
  MomentumEstimate m = MomentumEstimate::zero(3);
  for (int k = 1; k <= 30; ++k) {
    m = momentum_update(m, g, rho);
    const double scale = 1.0 - std::pow(1.0 - rho, k);
    REQUIRE((m.d_vec - scale * g).norm() < 1e-12);
  }
}

TEST_CASE("momentum never exceeds the largest input norm") {
  Rng rng(10);
  MomentumEstimate m = MomentumEstimate::zero(4);
  double max_g = 0.0;
  for (int k = 1; k <= 500; ++k) {
    Vec g(4);
    for (int i = 0; i < 4; ++i) g[i] = rng.normal() * 3.0;
    max_g = std::max(max_g, g.norm());
    m = momentum_update(m, g, rng.uniform(0.01, 1.0));
    REQUIRE(m.d_vec.norm() <= max_g + 1e-12);
  }
}

TEST_CASE("one-shot schedule values and shape") {
  CHECK(rho_schedule_mono(1, 10) ==
        doctest::Approx(2.0 / std::pow(4.0, 2.0 / 3.0)));
  CHECK(rho_schedule_mono(8, 10) ==
        doctest::Approx(1.5 / std::pow(4.0, 2.0 / 3.0)));
  // k = K/2 + 1 still belongs to the first branch.
  CHECK(rho_schedule_mono(6, 10) ==
        doctest::Approx(2.0 / std::pow(9.0, 2.0 / 3.0)));

  CHECK_THROWS_AS(rho_schedule_mono(1, 9), std::invalid_argument);
  CHECK_THROWS_AS(rho_schedule_mono(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(rho_schedule_mono(11, 10), std::invalid_argument);

  for (long K : {2L, 10L, 64L, 1000L}) {
    double prev = 2.0;
    for (long k = 1; k <= K / 2 + 1; ++k) {
      const double rho = rho_schedule_mono(k, K);
      REQUIRE(rho > 0.0);
      REQUIRE(rho <= 1.0);
      REQUIRE(rho <= prev);  // decreasing opening branch
      prev = rho;
    }
    prev = 0.0;
    for (long k = K / 2 + 2; k <= K; ++k) {
      const double rho = rho_schedule_mono(k, K);
      REQUIRE(rho > 0.0);
      REQUIRE(rho < 1.0);
      REQUIRE(rho >= prev);  // increasing closing branch
      prev = rho;
    }
  }
}

TEST_CASE("bandit schedule values and monotonicity") {
  CHECK(rho_schedule_bandit(1) ==
        doctest::Approx(2.0 / std::pow(3.0, 2.0 / 3.0)));
  CHECK(rho_schedule_bandit(1) == doctest::Approx(0.96150).epsilon(1e-4));
  CHECK(rho_schedule_bandit(6) == doctest::Approx(0.5));
  CHECK_THROWS_AS(rho_schedule_bandit(0), std::invalid_argument);
  double prev = 2.0;
  for (long k = 1; k <= 10000; k = k * 3 + 1) {
    const double rho = rho_schedule_bandit(k);
    REQUIRE(rho > 0.0);
    REQUIRE(rho <= 1.0);
    REQUIRE(rho < prev);
    prev = rho;
  }
}
