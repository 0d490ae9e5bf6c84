#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>
#include <vector>

#include "submax/objectives.hpp"
#include "submax/rounding.hpp"
#include "submax/rng.hpp"

using namespace submax;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<int>(v.size()));
  int i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

double product_probability(std::uint64_t s, const Vec& x) {
  double p = 1.0;
  for (int i = 0; i < x.size(); ++i) {
    p *= (s & (1ULL << i)) ? x[i] : (1.0 - x[i]);
  }
  return p;
}

Vec random_polytope_member(const ConstraintSet& poly, Rng& rng) {
  Vec x = Vec::Zero(poly.dim());
  double total = 1.0;
  for (int p = 0; p < 4; ++p) {
    const double w = (p == 3) ? total : total * rng.uniform01();
    Vec dir(poly.dim());
    for (int i = 0; i < poly.dim(); ++i) dir[i] = rng.normal();
    x += w * poly.lmo(dir);
    total -= w;
  }
  return x;
}

}  // namespace

TEST_CASE("matroid independence checks") {
  const Matroid u2 = Matroid::uniform(2, 4);
  CHECK(u2.is_independent(0));  // empty set
  CHECK(u2.is_independent(0b0101));
  CHECK_FALSE(u2.is_independent(0b0111));

  const Matroid part = Matroid::partition({0, 0, 1}, {1, 1});
  CHECK(part.is_independent(0b101));   // {1, 3}
  CHECK_FALSE(part.is_independent(0b011));  // {1, 2} both in part 0
  CHECK(part.is_independent(0));
}

TEST_CASE("random_round is the product distribution") {
  Rng rng(7);
  // Indicator input rounds deterministically.
  CHECK(random_round(vec({1.0, 0.0, 1.0}), rng) == 0b101);

  // d = 3 at (1/2, 1/2, 1/2): every subset frequency near 1/8.
  std::map<std::uint64_t, long> counts;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    ++counts[random_round(vec({0.5, 0.5, 0.5}), rng)];
  }
  for (std::uint64_t s = 0; s < 8; ++s) {
    const double freq = static_cast<double>(counts[s]) / n;
    CHECK(std::abs(freq - 0.125) < 0.02);
  }

  CHECK_THROWS_AS((void)random_round(vec({1.2, 0.0}), rng),
                  std::invalid_argument);
}

TEST_CASE("random_round unbiasedness via exact enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = make_random_set_objective(SetObjectiveKind::kCoverage, 10, 25,
                                       rng);
    const MultilinearExtension ext(f);
    Vec x(10);
    for (int i = 0; i < 10; ++i) x[i] = rng.uniform01();
    // E[f(random_round(x))] over the product distribution, by enumeration.
    double expected = 0.0;
    for (std::uint64_t s = 0; s < (1ULL << 10); ++s) {
      expected += product_probability(s, x) * f->value(s);
    }
    REQUIRE(ext.value(x) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("pipage keeps integral inputs") {
  Rng rng(13);
  const Matroid m = Matroid::uniform(2, 4);
  CHECK(pipage_round(vec({1.0, 0.0, 1.0, 0.0}), m, rng) == 0b0101);
  CHECK(pipage_round(vec({0.0, 0.0, 0.0, 0.0}), m, rng) == 0);
}

TEST_CASE("pipage rejects points outside the polytope") {
  Rng rng(17);
  const Matroid m = Matroid::uniform(1, 2);
  CHECK_THROWS_AS((void)pipage_round(vec({0.9, 0.9}), m, rng),
                  std::invalid_argument);
}

TEST_CASE("pipage on one fractional pair resolves to a single coordinate") {
  Rng rng(19);
  const Matroid m = Matroid::uniform(1, 2);
  long ones = 0, twos = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const std::uint64_t s = pipage_round(vec({0.5, 0.5}), m, rng);
    REQUIRE((s == 0b01 || s == 0b10));  // never {} or {1,2}: sum is integral
    if (s == 0b01) ++ones;
    else ++twos;
  }
  CHECK(std::abs(static_cast<double>(ones) / n - 0.5) < 0.02);
  CHECK(std::abs(static_cast<double>(twos) / n - 0.5) < 0.02);
}

TEST_CASE("pipage output size stays within the rounded mass") {
  Rng rng(23);
  const Matroid m = Matroid::uniform(3, 6);
  const ConstraintSet poly = m.polytope();
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec x = random_polytope_member(poly, rng);
    const double mass = x.sum();
    const std::uint64_t s = pipage_round(x, m, rng);
    REQUIRE(m.is_independent(s));
    const int size = std::popcount(s);
    REQUIRE(size >= static_cast<int>(std::floor(mass - 1e-9)));
    REQUIRE(size <= static_cast<int>(std::ceil(mass + 1e-9)));
  }
}

TEST_CASE("pipage preserves per-coordinate marginals") {
  Rng rng(29);
  const Matroid m = Matroid::partition({0, 0, 0, 1, 1}, {2, 1});
  const Vec x = vec({0.4, 0.7, 0.5, 0.2, 0.6});
  const int n = 200000;
  Vec freq = Vec::Zero(5);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t s = pipage_round(x, m, rng);
    REQUIRE(m.is_independent(s));
    for (int i = 0; i < 5; ++i) {
      if (s & (1ULL << i)) freq[i] += 1.0;
    }
  }
  freq /= n;
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(freq[i] - x[i]) < 0.01);
  }
}

TEST_CASE("pipage is lossless in expectation for submodular objectives") {
  Rng rng(31);
  const int n = 10000;
  for (int trial = 0; trial < 50; ++trial) {
    const bool uniform = trial % 2 == 0;
    const int d = 4 + static_cast<int>(rng.below(5));  // 4..8
    const Matroid m =
        uniform ? Matroid::uniform(1 + static_cast<int>(rng.below(d)), d)
                : Matroid::partition(
                      [&] {
                        std::vector<int> parts(d);
                        for (int i = 0; i < d; ++i) {
                          parts[i] = i < d / 2 ? 0 : 1;
                        }
                        return parts;
                      }(),
                      {1 + static_cast<int>(rng.below(2)),
                       1 + static_cast<int>(rng.below(2))});
    auto f = make_random_set_objective(SetObjectiveKind::kCoverage, d, 3 * d,
                                       rng);
    const MultilinearExtension ext(f);
    const Vec x = random_polytope_member(m.polytope(), rng);
    const double fx = ext.value(x);
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = f->value(pipage_round(x, m, rng));
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    const double band = 4.0 * std::sqrt(var / n);
    CAPTURE(trial);
    REQUIRE(mean >= fx - band - 1e-9);
  }
}

TEST_CASE("impossibility demo recovers the two incompatible schemes") {
  const ImpossibilityReport rep = impossibility_demo(100, 7);
  CHECK(rep.max_residual_a < 1e-12);
  CHECK(rep.max_residual_b < 1e-12);
  CHECK(rep.min_solution_gap > 0.0);
  for (const auto& s : rep.samples) {
    // Family A: p = (x1 - x1 x2, x2); family B: p = (x1, x2 - x1 x2).
    REQUIRE(s.p1_family_a ==
            doctest::Approx(s.x1 - s.x1 * s.x2).epsilon(1e-12));
    REQUIRE(s.p2_family_a == doctest::Approx(s.x2).epsilon(1e-12));
    REQUIRE(s.p1_family_b == doctest::Approx(s.x1).epsilon(1e-12));
    REQUIRE(s.p2_family_b ==
            doctest::Approx(s.x2 - s.x1 * s.x2).epsilon(1e-12));
    // The two solutions differ by exactly x1 x2 > 0 at interior points.
    REQUIRE(std::abs(s.p1_family_a - s.p1_family_b) ==
            doctest::Approx(s.x1 * s.x2).epsilon(1e-12));
    REQUIRE(s.x1 * s.x2 > 0.0);
    // Both are genuine probability assignments.
    REQUIRE(s.p1_family_a >= 0.0);
    REQUIRE(s.p2_family_a >= 0.0);
    REQUIRE(s.p1_family_a + s.p2_family_a <= 1.0 + 1e-12);
    REQUIRE(s.p1_family_b + s.p2_family_b <= 1.0 + 1e-12);
  }
  CHECK(rep.samples.size() == 100);
}

TEST_CASE("fixed probabilities reproduce the extension at the spec point") {
  // At x = (1/2, 1/2): family A gives (1/4, 1/2), family B gives (1/2, 1/4).
  const double x1 = 0.5, x2 = 0.5;
  CHECK(x1 - x1 * x2 == doctest::Approx(0.25));
  CHECK(x2 == doctest::Approx(0.5));
  // Verify unbiasedness for both families at several (a, b).
  for (double a : {1.0, 0.5}) {
    for (double b : {2.0, 3.0}) {
      const double F = a * x1 + b * x2 - a * x1 * x2;
      CHECK((x1 - x1 * x2) * a + x2 * b == doctest::Approx(F).epsilon(1e-12));
    }
  }
}

TEST_CASE("matroid_from_constraint round-trips the polytope families") {
  const auto um = ConstraintSet::uniform_matroid(2, 5);
  CHECK(matroid_from_constraint(um).is_independent(0b00011));
  const auto pm = ConstraintSet::partition_matroid({0, 0, 1}, {1, 1});
  CHECK_FALSE(matroid_from_constraint(pm).is_independent(0b011));
  const auto box = ConstraintSet::box(Vec::Ones(3));
  CHECK_THROWS_AS((void)matroid_from_constraint(box), std::invalid_argument);
}
