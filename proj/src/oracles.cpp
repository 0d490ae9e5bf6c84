#include "submax/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace submax {

namespace {

Vec clamp01(const Vec& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

// Projection onto {y : 0 <= y <= 1, sum(y_idx) <= budget} restricted to the
// given coordinates: y = clamp(x - lambda, 0, 1) with the smallest
// lambda >= 0 meeting the budget.
void project_capped_budget(Vec& x, const std::vector<int>& idx,
                           double budget) {
  double clamped_sum = 0.0;
  double hi = 0.0;
  for (int i : idx) {
    clamped_sum += std::clamp(x[i], 0.0, 1.0);
    hi = std::max(hi, x[i]);
  }
  if (clamped_sum <= budget) {
    for (int i : idx) x[i] = std::clamp(x[i], 0.0, 1.0);
    return;
  }
  double lo = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (int i : idx) s += std::clamp(x[i] - mid, 0.0, 1.0);
    (s > budget ? lo : hi) = mid;
  }
  for (int i : idx) x[i] = std::clamp(x[i] - hi, 0.0, 1.0);
}

Vec project_constraint_set(const ConstraintSet& set, const Vec& x) {
  switch (set.family()) {
    case Family::kBox:
      return x.cwiseMax(0.0).cwiseMin(set.box_upper());
    case Family::kScaledSimplex: {
      Vec y = x;
      std::vector<int> all(set.dim());
      for (int i = 0; i < set.dim(); ++i) all[i] = i;
      project_capped_budget(y, all, set.simplex_budget());
      return y;
    }
    case Family::kUniformMatroid: {
      Vec y = x;
      std::vector<int> all(set.dim());
      for (int i = 0; i < set.dim(); ++i) all[i] = i;
      project_capped_budget(y, all, static_cast<double>(set.matroid_rank()));
      return y;
    }
    case Family::kPartitionMatroid: {
      Vec y = x;
      const auto& part_of = set.part_of();
      const auto& caps = set.caps();
      std::vector<std::vector<int>> groups(caps.size());
      for (int i = 0; i < set.dim(); ++i) groups[part_of[i]].push_back(i);
      for (std::size_t p = 0; p < groups.size(); ++p) {
        project_capped_budget(y, groups[p], static_cast<double>(caps[p]));
      }
      return y;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::string oracle_kind_name(OracleKind k) {
  return k == OracleKind::kFtpl ? "ftpl" : "ogd";
}

Vec project_onto(const FeasibleRegion& region, const Vec& x) {
  check_dim(region, x, "project_onto");
  if (const auto* set = dynamic_cast<const ConstraintSet*>(&region)) {
    return project_constraint_set(*set, x);
  }
  if (const auto* interior = dynamic_cast<const InteriorSet*>(&region)) {
    // Projection commutes with the shrink-and-translate map.
    const double scale = 1.0 - interior->alpha();
    const Vec shift = interior->lower_bound();
    const Vec pulled = (x - shift) / scale;
    return scale * project_constraint_set(interior->base(), pulled) + shift;
  }
  throw std::invalid_argument("project_onto: unsupported region type");
}

FtplOracle::FtplOracle(const FeasibleRegion& region, std::uint64_t stream_seed,
                       std::optional<double> eta0)
    : region_(region),
      stream_seed_(stream_seed),
      eta0_(eta0.value_or(region.bounds().diameter)),
      accumulated_(Vec::Zero(region.dim())) {
  if (eta0_ <= 0.0) throw std::invalid_argument("ftpl: eta0 must be > 0");
}

Vec FtplOracle::predict() const {
  const long t = t_ + 1;
  Rng pr = Rng::stream(stream_seed_, streams::kPerturbation,
                       static_cast<std::uint64_t>(t));
  const double eta_t = eta0_ * std::sqrt(static_cast<double>(t));
  Vec direction = accumulated_;
  for (int i = 0; i < direction.size(); ++i) {
    direction[i] += pr.uniform(-0.5 * eta_t, 0.5 * eta_t);
  }
  return region_.lmo(direction);
}

void FtplOracle::feed(const Vec& reward_vector) {
  check_dim(region_, reward_vector, "ftpl feed");
  accumulated_ += reward_vector;
  ++t_;
}

OgdOracle::OgdOracle(const FeasibleRegion& region, std::optional<double> eta0)
    : region_(region),
      diameter_(eta0.value_or(region.bounds().diameter)),
      iterate_(region.lower_bound()) {
  if (diameter_ <= 0.0) throw std::invalid_argument("ogd: step scale must be > 0");
  // Fails fast on regions without an exact projection.
  (void)project_onto(region_, iterate_);
}

void OgdOracle::feed(const Vec& reward_vector) {
  check_dim(region_, reward_vector, "ogd feed");
  ++t_;
  grad_scale_ = std::max(grad_scale_, reward_vector.norm());
  if (grad_scale_ <= 0.0) return;  // nothing observed yet; stay put
  const double step =
      diameter_ / (grad_scale_ * std::sqrt(static_cast<double>(t_)));
  iterate_ = project_onto(region_, iterate_ + step * reward_vector);
}

std::unique_ptr<LinearOracle> make_oracle(OracleKind kind,
                                          const FeasibleRegion& region,
                                          std::uint64_t stream_seed,
                                          std::optional<double> eta0) {
  if (kind == OracleKind::kFtpl) {
    return std::make_unique<FtplOracle>(region, stream_seed, eta0);
  }
  return std::make_unique<OgdOracle>(region, eta0);
}

OracleBank::OracleBank(OracleKind kind, long count,
                       const FeasibleRegion& region, std::uint64_t seed,
                       std::optional<double> eta0) {
  if (count < 1) throw std::invalid_argument("OracleBank: count must be >= 1");
  oracles_.reserve(count);
  for (long k = 0; k < count; ++k) {
    oracles_.push_back(make_oracle(
        kind, region,
        Rng::stream(seed, streams::kOracle, static_cast<std::uint64_t>(k))
            .next(),
        eta0));
  }
}

double empirical_oracle_regret(LinearOracle& oracle,
                               const FeasibleRegion& region,
                               const std::vector<Vec>& adversary) {
  if (adversary.empty()) return 0.0;
  Vec total = Vec::Zero(region.dim());
  double earned = 0.0;
  for (const Vec& d : adversary) {
    earned += oracle.predict().dot(d);
    oracle.feed(d);
    total += d;
  }
  return region.lmo(total).dot(total) - earned;
}

std::vector<double> empirical_oracle_regret_curve(
    LinearOracle& oracle, const FeasibleRegion& region,
    const std::function<Vec(long)>& adversary_at,
    const std::vector<long>& horizons) {
  std::vector<double> out;
  out.reserve(horizons.size());
  Vec total = Vec::Zero(region.dim());
  double earned = 0.0;
  long t = 0;
  for (long horizon : horizons) {
    for (; t < horizon; ++t) {
      const Vec d = adversary_at(t);
      earned += oracle.predict().dot(d);
      oracle.feed(d);
      total += d;
    }
    out.push_back(region.lmo(total).dot(total) - earned);
  }
  return out;
}

}  // namespace submax
