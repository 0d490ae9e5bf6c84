#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "submax/geometry.hpp"
#include "submax/rng.hpp"

namespace submax {

// Online linear maximization oracle: predict a feasible point before seeing
// this round's reward vector, then consume it. Single-owner mutable state;
// the feasible region must outlive the oracle.
class LinearOracle {
 public:
  virtual ~LinearOracle() = default;
  // Prediction for the upcoming round; deterministic given the fed history
  // and the oracle's stream seed, and always a member of the region.
  virtual Vec predict() const = 0;
  virtual void feed(const Vec& reward_vector) = 0;
  virtual long rounds_fed() const = 0;
};

enum class OracleKind { kFtpl, kOgd };

std::string oracle_kind_name(OracleKind k);

// Follow-the-perturbed-leader on the accumulated reward vector. Needs only
// the LMO, so it works on every supported region. The perturbation for round
// t is uniform on [-eta_t/2, eta_t/2]^d with eta_t = eta0 * sqrt(t), drawn
// from a per-round substream so repeated predicts agree.
class FtplOracle final : public LinearOracle {
 public:
  FtplOracle(const FeasibleRegion& region, std::uint64_t stream_seed,
             std::optional<double> eta0 = std::nullopt);
  Vec predict() const override;
  void feed(const Vec& reward_vector) override;
  long rounds_fed() const override { return t_; }

 private:
  const FeasibleRegion& region_;
  std::uint64_t stream_seed_;
  double eta0_;
  Vec accumulated_;
  long t_{0};
};

// Projected online gradient ascent with step D / (G sqrt(t)), where G is the
// running max of the fed reward-vector norms. Projection onto the supported
// families is exact (clamping, or clamp-with-shift for budget constraints).
class OgdOracle final : public LinearOracle {
 public:
  OgdOracle(const FeasibleRegion& region,
            std::optional<double> eta0 = std::nullopt);
  Vec predict() const override { return iterate_; }
  void feed(const Vec& reward_vector) override;
  long rounds_fed() const override { return t_; }

 private:
  const FeasibleRegion& region_;
  double diameter_;
  Vec iterate_;
  double grad_scale_{0.0};
  long t_{0};
};

// Exact Euclidean projection onto the structured families (and affine
// pullback for interiors). Lives here as an oracle implementation detail.
Vec project_onto(const FeasibleRegion& region, const Vec& x);

std::unique_ptr<LinearOracle> make_oracle(OracleKind kind,
                                          const FeasibleRegion& region,
                                          std::uint64_t stream_seed,
                                          std::optional<double> eta0 = {});

// K independent oracle instances, one per inner Frank-Wolfe index. Oracle k
// only ever receives the reward vector for its own index.
class OracleBank {
 public:
  OracleBank(OracleKind kind, long count, const FeasibleRegion& region,
             std::uint64_t seed, std::optional<double> eta0 = {});
  long size() const { return static_cast<long>(oracles_.size()); }
  LinearOracle& at(long k) { return *oracles_.at(k); }  // 0-based

 private:
  std::vector<std::unique_ptr<LinearOracle>> oracles_;
};

// max_v sum_s <v, d_s> - sum_s <v_s, d_s>, with the max taken by one LMO on
// the summed adversary. Measurement utility for the sqrt(t) regret checks;
// not used inside the algorithms.
double empirical_oracle_regret(LinearOracle& oracle,
                               const FeasibleRegion& region,
                               const std::vector<Vec>& adversary);

// Regret after each prefix length in `horizons` (ascending).
std::vector<double> empirical_oracle_regret_curve(
    LinearOracle& oracle, const FeasibleRegion& region,
    const std::function<Vec(long)>& adversary_at,
    const std::vector<long>& horizons);

}  // namespace submax
