#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "submax/estimators.hpp"
#include "submax/geometry.hpp"
#include "submax/oracles.hpp"
#include "submax/rounding.hpp"
#include "submax/rng.hpp"

namespace submax {

// Horizon decomposition shared by the three algorithms. The one-shot
// algorithm uses blocks of K rounds (L = K); the bandit algorithms use
// blocks of L rounds with K exploration steps, K <= L.
struct BlockPlan {
  long T_effective{0};
  long Q{0};
  long K{0};
  long L{0};
  double eta{0.0};    // 1 / K exactly
  double delta{0.0};  // smoothing radius; 0 for the full-information setting
};

enum class Phase : std::uint8_t { kExploit = 0, kExplore = 1 };

struct RoundRecord {
  std::int32_t block;   // 1-based block index q
  std::int32_t inner;   // inner index k for exploration rounds, else 0
  Phase phase;
  bool feasible;
  double reward;
};

struct RegretTrace {
  std::vector<RoundRecord> rounds;
  BlockPlan plan;
  bool truncated{false};

  // Filled only when the runner is asked to record plays (tests, demos).
  std::vector<Vec> played_points;
  std::vector<std::uint64_t> played_sets;

  double total_reward() const;
  bool all_feasible() const;
};

// Online adversary with a per-round feedback budget. Exactly one feedback
// query is permitted per round; a second query throws. Reward observation
// for the full-information algorithm is bookkeeping, not feedback.
class AdversaryEnv {
 public:
  virtual ~AdversaryEnv() = default;
  virtual int dim() const = 0;
  virtual long horizon() const = 0;

  // Full-information rounds: declare the played point and receive the
  // reward; then query the single per-round stochastic gradient.
  virtual double play(long t, const Vec& played);
  virtual Vec grad_feedback(long t, const Vec& at, Rng& rng);

  // Bandit rounds: playing the point and observing its value are one query.
  virtual double value_feedback(long t, const Vec& played);

  // Responsive set rounds: observe f_t of the played subset (the caller
  // zeroes the reward when the subset is dependent).
  virtual double set_value_feedback(long t, std::uint64_t played);

  long feedback_queries() const { return queries_; }

 protected:
  // Rounds must be consumed in order, one feedback each.
  void consume_feedback(long t);
  void note_play(long t);

 private:
  long queries_{0};
  long plays_{0};
};

// Offline Frank-Wolfe ascent from the origin with step 1/iters; the
// (1 - 1/e) baseline and the fallback benchmark optimizer.
Vec offline_fw(const std::function<Vec(const Vec&)>& grad,
               const ConstraintSet& set, long iters);

// Theorem-driven parameter derivations. Horizons are truncated to
// T_effective = Q K (Q L) and both values are reported in the plan.
BlockPlan derive_params_mono(long T);
std::pair<BlockPlan, InteriorSet> derive_params_bandit(
    long T, const ConstraintSet& set,
    std::optional<double> delta_override = std::nullopt,
    std::optional<long> K_override = std::nullopt,
    std::optional<long> L_override = std::nullopt);

// One-shot online Frank-Wolfe (one stochastic gradient per round). Every
// block builds x_q from K oracle predictions, plays x_q for all K rounds,
// and routes the per-round gradients through a uniform random permutation
// so inner index k sees an unbiased sample of the block average.
RegretTrace mono_fw_run(AdversaryEnv& env, const ConstraintSet& set,
                        OracleBank& bank, const BlockPlan& plan,
                        std::uint64_t seed, bool record_plays = false);

// Biphasic bandit Frank-Wolfe on a delta-interior: K of the L rounds per
// block probe x^(k) + delta u through the one-point estimator, the rest
// exploit x_q. All plays stay inside the base set.
RegretTrace bandit_fw_run(AdversaryEnv& env, const InteriorSet& interior,
                          OracleBank& bank, const BlockPlan& plan,
                          std::uint64_t seed, bool record_plays = false);

// Set-function variant for the responsive bandit model: exploration plays
// the random rounding of the probe (observing f even when the set is
// dependent, with zero reward), exploitation plays the lossless rounding
// of x_q.
RegretTrace responsive_fw_run(AdversaryEnv& env, const InteriorSet& interior,
                              OracleBank& bank, const BlockPlan& plan,
                              const Matroid& matroid, std::uint64_t seed,
                              bool record_plays = false);

// Per-round (1 - 1/e)-regret curve against a horizon benchmark
// max_x sum_t F_t(x): R_s = (1-1/e) benchmark s/T - cumulative reward.
std::vector<double> compute_regret(const RegretTrace& trace, double benchmark);
double final_regret(const RegretTrace& trace, double benchmark);

inline constexpr double kOneMinusInvE = 0.63212055882855767840;

}  // namespace submax
