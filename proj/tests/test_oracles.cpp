#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "submax/oracles.hpp"
#include "submax/rng.hpp"

using namespace submax;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<int>(v.size()));
  int i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

std::vector<Vec> sign_adversary(int d, long t, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(t);
  for (long s = 0; s < t; ++s) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("ftpl first prediction is a reproducible vertex") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0, 1.0}));
  FtplOracle a(box, 42);
  FtplOracle b(box, 42);
  FtplOracle c(box, 43);
  CHECK((a.predict() - b.predict()).norm() == doctest::Approx(0.0));
  CHECK(box.contains(a.predict()));
  // Repeated predicts in the same round agree.
  CHECK((a.predict() - a.predict()).norm() == doctest::Approx(0.0));
  (void)c;
}

TEST_CASE("ogd starts at the region's lower bound") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0}));
  OgdOracle o(box);
  CHECK(o.predict().norm() == doctest::Approx(0.0));

  const InteriorSet interior = shrink_interior(box, 0.05);
  OgdOracle oi(interior);
  CHECK((oi.predict() - interior.lower_bound()).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("ftpl locks onto a persistent reward direction") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0, 1.0}));
  FtplOracle o(box, 7);
  const Vec d = vec({1.0, 0.0, 0.0});
  for (int t = 0; t < 100; ++t) o.feed(d);
  int hits = 0;
  for (int t = 0; t < 100; ++t) {
    const Vec v = o.predict();
    if (v[0] == doctest::Approx(1.0)) ++hits;
    o.feed(d);
  }
  CHECK(hits >= 95);
}

TEST_CASE("ftpl under zero rewards visits every vertex of a 2-vertex set") {
  const auto segment = ConstraintSet::box(vec({1.0}));
  FtplOracle o(segment, 11);
  std::set<long> seen;
  const Vec zero = Vec::Zero(1);
  for (int t = 0; t < 10000; ++t) {
    seen.insert(std::lround(o.predict()[0]));
    o.feed(zero);
  }
  CHECK(seen.count(0) == 1);
  CHECK(seen.count(1) == 1);
}

TEST_CASE("ogd climbs monotonically and clamps at the box face") {
  const auto segment = ConstraintSet::box(vec({1.0}));
  OgdOracle o(segment);
  double prev = 0.0;
  for (int t = 0; t < 200; ++t) {
    o.feed(vec({1.0}));
    const double it = o.predict()[0];
    REQUIRE(it >= prev - 1e-12);
    REQUIRE(it <= 1.0 + 1e-12);
    prev = it;
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("a single dominant feed drives ftpl to the lmo vertex") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0}));
  FtplOracle o(box, 3, 1e-9);  // tiny perturbation scale
  const Vec d = vec({5.0, -2.0});
  o.feed(d);
  CHECK((o.predict() - box.lmo(d)).norm() == doctest::Approx(0.0));
}

TEST_CASE("empirical regret of the zero adversary is zero") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0}));
  FtplOracle o(box, 5);
  const std::vector<Vec> zeros(100, Vec::Zero(2));
  CHECK(empirical_oracle_regret(o, box, zeros) == doctest::Approx(0.0));
}

TEST_CASE("constant adversary: regret scales like sqrt(t)") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0, 1.0}));
  const Vec d = vec({1.0, 0.5, -0.25});
  for (const bool use_ftpl : {true, false}) {
    std::vector<double> regrets;
    for (long t : {250L, 1000L, 4000L}) {
      // Median over seeds to tame perturbation noise.
      std::vector<double> per_seed;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto oracle = make_oracle(
            use_ftpl ? OracleKind::kFtpl : OracleKind::kOgd, box, seed);
        const std::vector<Vec> adversary(t, d);
        per_seed.push_back(empirical_oracle_regret(*oracle, box, adversary));
      }
      std::sort(per_seed.begin(), per_seed.end());
      regrets.push_back(per_seed[per_seed.size() / 2]);
    }
    CAPTURE(use_ftpl);
    CHECK(regrets[1] / std::max(regrets[0], 1e-9) < 2.5);
    CHECK(regrets[2] / std::max(regrets[1], 1e-9) < 2.5);
  }
}

TEST_CASE("random-sign adversary: regret over sqrt(t) stays bounded") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0, 1.0}));
  const long t = 10000;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FtplOracle o(box, seed);
    const auto adversary = sign_adversary(3, t, 1000 + seed);
    const double regret = empirical_oracle_regret(o, box, adversary);
    REQUIRE(regret >= -1e-9);
    worst_ratio = std::max(worst_ratio, regret / std::sqrt(double(t)));
  }
  MESSAGE("max regret / sqrt(t) over 20 seeds: ", worst_ratio);
  CHECK(worst_ratio < 20.0);
}

TEST_CASE("regret growth is sublinear for both variants") {
  const auto box = ConstraintSet::box(vec({1.0, 1.0, 1.0}));
  const std::vector<long> horizons = {100, 1000, 10000, 100000};
  for (const OracleKind kind : {OracleKind::kFtpl, OracleKind::kOgd}) {
    std::vector<double> median_regret(horizons.size(), 0.0);
    std::vector<std::vector<double>> per_seed(horizons.size());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto oracle = make_oracle(kind, box, seed);
      Rng adv(500 + seed);
      const auto curve = empirical_oracle_regret_curve(
          *oracle, box,
          [&](long) {
            Vec v(3);
            for (int i = 0; i < 3; ++i) v[i] = adv.uniform01() < 0.5 ? -1 : 1;
            return v;
          },
          horizons);
      for (std::size_t i = 0; i < horizons.size(); ++i) {
        per_seed[i].push_back(curve[i]);
      }
    }
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      std::sort(per_seed[i].begin(), per_seed[i].end());
      const std::size_t n_seeds = per_seed[i].size();
      median_regret[i] =
          0.5 * (per_seed[i][(n_seeds - 1) / 2] + per_seed[i][n_seeds / 2]);
    }
    // Least-squares slope in log-log space.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      const double x = std::log10(static_cast<double>(horizons[i]));
      const double y = std::log10(std::max(median_regret[i], 1e-9));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(horizons.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CAPTURE(oracle_kind_name(kind));
    CHECK(slope <= 0.6);
  }
}

TEST_CASE("predictions are always feasible") {
  Rng rng(9);
  std::vector<ConstraintSet> sets;
  sets.push_back(ConstraintSet::box(vec({1.0, 2.0})));
  sets.push_back(ConstraintSet::scaled_simplex(1.5, 3));
  sets.push_back(ConstraintSet::uniform_matroid(2, 4));
  sets.push_back(ConstraintSet::partition_matroid({0, 0, 1}, {1, 1}));
  for (const auto& set : sets) {
    for (const OracleKind kind : {OracleKind::kFtpl, OracleKind::kOgd}) {
      auto oracle = make_oracle(kind, set, 17);
      for (int t = 0; t < 300; ++t) {
        REQUIRE(set.contains(oracle->predict(), 1e-9));
        Vec d(set.dim());
        for (int i = 0; i < set.dim(); ++i) d[i] = rng.normal() * 2.0;
        oracle->feed(d);
      }
    }
  }
  // Interior regions too.
  const auto box = ConstraintSet::box(vec({1.0, 1.0}));
  const InteriorSet interior = shrink_interior(box, 0.05);
  for (const OracleKind kind : {OracleKind::kFtpl, OracleKind::kOgd}) {
    auto oracle = make_oracle(kind, interior, 23);
    for (int t = 0; t < 300; ++t) {
      REQUIRE(interior.contains(oracle->predict(), 1e-9));
      Vec d(2);
      for (int i = 0; i < 2; ++i) d[i] = rng.normal();
      oracle->feed(d);
    }
  }
}

TEST_CASE("identical seeds and adversaries replay identical predictions") {
  const auto set = ConstraintSet::uniform_matroid(2, 5);
  const auto adversary = sign_adversary(5, 200, 99);
  for (const OracleKind kind : {OracleKind::kFtpl, OracleKind::kOgd}) {
    auto a = make_oracle(kind, set, 31);
    auto b = make_oracle(kind, set, 31);
    for (const auto& d : adversary) {
      REQUIRE((a->predict() - b->predict()).norm() == 0.0);
      a->feed(d);
      b->feed(d);
    }
  }
}

TEST_CASE("projection onto the structured families is exact") {
  Rng rng(15);
  std::vector<ConstraintSet> sets;
  sets.push_back(ConstraintSet::box(vec({1.0, 0.5, 2.0})));
  sets.push_back(ConstraintSet::scaled_simplex(1.2, 3));
  sets.push_back(ConstraintSet::uniform_matroid(2, 4));
  sets.push_back(ConstraintSet::partition_matroid({0, 0, 1, 1}, {1, 1}));
  for (const auto& set : sets) {
    const int d = set.dim();
    for (int trial = 0; trial < 500; ++trial) {
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1.5, 2.5);
      const Vec p = project_onto(set, x);
      REQUIRE(set.contains(p, 1e-9));
      // Idempotence and the variational inequality versus random members.
      REQUIRE((project_onto(set, p) - p).norm() < 1e-9);
      for (int k = 0; k < 20; ++k) {
        Vec dir(d);
        for (int i = 0; i < d; ++i) dir[i] = rng.normal();
        const Vec z = set.lmo(dir) * rng.uniform01();
        REQUIRE((x - p).dot(z - p) <= 1e-9);
      }
    }
  }
}
