#include "submax/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace submax {

namespace {

long floor_pow(long T, double exponent) {
  const long double v =
      std::pow(static_cast<long double>(T), static_cast<long double>(exponent));
  return static_cast<long>(std::floor(v + 1e-9L));
}

// Uniform random permutation of 1..n.
std::vector<long> permutation(long n, Rng& rng) {
  std::vector<long> p(n);
  std::iota(p.begin(), p.end(), 1L);
  rng.shuffle(p.begin(), p.end());
  return p;
}

}  // namespace

double RegretTrace::total_reward() const {
  double s = 0.0;
  for (const auto& r : rounds) s += r.reward;
  return s;
}

bool RegretTrace::all_feasible() const {
  for (const auto& r : rounds) {
    if (!r.feasible) return false;
  }
  return true;
}

void AdversaryEnv::consume_feedback(long t) {
  if (t != queries_ + 1) {
    throw std::logic_error("feedback budget violated at round " +
                           std::to_string(t) + " (queries so far: " +
                           std::to_string(queries_) + ")");
  }
  ++queries_;
}

void AdversaryEnv::note_play(long t) {
  if (t != plays_ + 1) {
    throw std::logic_error("rounds must be played in order; got round " +
                           std::to_string(t) + " after " +
                           std::to_string(plays_) + " plays");
  }
  ++plays_;
}

double AdversaryEnv::play(long, const Vec&) {
  throw std::logic_error("environment does not expose full-information plays");
}

Vec AdversaryEnv::grad_feedback(long, const Vec&, Rng&) {
  throw std::logic_error("environment does not expose gradient feedback");
}

double AdversaryEnv::value_feedback(long, const Vec&) {
  throw std::logic_error("environment does not expose value feedback");
}

double AdversaryEnv::set_value_feedback(long, std::uint64_t) {
  throw std::logic_error("environment does not expose set-value feedback");
}

Vec offline_fw(const std::function<Vec(const Vec&)>& grad,
               const ConstraintSet& set, long iters) {
  if (iters < 1) throw std::invalid_argument("offline_fw: iters must be >= 1");
  Vec x = Vec::Zero(set.dim());
  const double step = 1.0 / static_cast<double>(iters);
  for (long k = 0; k < iters; ++k) {
    x += step * set.lmo(grad(x));
  }
  return x;
}

BlockPlan derive_params_mono(long T) {
  long K = floor_pow(T, 3.0 / 5.0);
  K -= K % 2;  // the schedule's two branches assume an even K
  if (K < 2) {
    throw std::invalid_argument(
        "derive_params_mono: horizon too small for K >= 2");
  }
  BlockPlan plan;
  plan.K = K;
  plan.L = K;
  plan.Q = T / K;
  plan.T_effective = plan.Q * K;
  plan.eta = 1.0 / static_cast<double>(K);
  plan.delta = 0.0;
  return plan;
}

std::pair<BlockPlan, InteriorSet> derive_params_bandit(
    long T, const ConstraintSet& set, std::optional<double> delta_override,
    std::optional<long> K_override, std::optional<long> L_override) {
  BlockPlan plan;
  plan.L = L_override.value_or(floor_pow(T, 7.0 / 9.0));
  if (plan.L < 1 || plan.L > T) {
    throw std::invalid_argument("derive_params_bandit: invalid block size L");
  }
  plan.K = std::min(K_override.value_or(floor_pow(T, 2.0 / 3.0)), plan.L);
  if (plan.K < 1) {
    throw std::invalid_argument(
        "derive_params_bandit: horizon too small for K >= 1");
  }
  plan.Q = T / plan.L;
  plan.T_effective = plan.Q * plan.L;
  plan.eta = 1.0 / static_cast<double>(plan.K);

  const double r = set.inscribed_orthant_radius();
  const double sqrt_d = std::sqrt(static_cast<double>(set.dim()));
  plan.delta = delta_override.value_or(
      r / (sqrt_d + 2.0) *
      std::pow(static_cast<double>(plan.T_effective), -1.0 / 9.0));
  // Throws "delta too large for set" when alpha would reach 1.
  InteriorSet interior = shrink_interior(set, plan.delta);
  return {plan, std::move(interior)};
}

RegretTrace mono_fw_run(AdversaryEnv& env, const ConstraintSet& set,
                        OracleBank& bank, const BlockPlan& plan,
                        std::uint64_t seed, bool record_plays) {
  const int d = set.dim();
  if (env.dim() != d) {
    throw std::invalid_argument("mono_fw_run: env/set dimension mismatch");
  }
  const long K = plan.K;
  if (bank.size() != K) {
    throw std::invalid_argument("mono_fw_run: bank must hold K oracles");
  }
  if (K % 2 != 0) {
    throw std::invalid_argument("mono_fw_run: K must be even");
  }

  RegretTrace trace;
  trace.plan = plan;
  const long Q = std::min(plan.Q, env.horizon() / K);
  trace.truncated = Q < plan.Q;
  trace.rounds.reserve(Q * K);

  std::vector<Vec> iterates(K + 1);
  std::vector<Vec> grads(K);
  for (long q = 1; q <= Q; ++q) {
    iterates[0] = Vec::Zero(d);
    for (long k = 0; k < K; ++k) {
      const Vec v = bank.at(k).predict();
      iterates[k + 1] = iterates[k] + plan.eta * v;
    }
    const Vec& x_q = iterates[K];
    const bool x_q_feasible = set.contains(x_q);

    Rng perm_rng =
        Rng::stream(seed, streams::kPermutation, static_cast<std::uint64_t>(q));
    const std::vector<long> inner_of_slot = permutation(K, perm_rng);

    const long start = (q - 1) * K;
    for (long i = 0; i < K; ++i) {
      const long t = start + i + 1;
      const double reward = env.play(t, x_q);
      const long k_inner = inner_of_slot[i];
      Rng noise =
          Rng::stream(seed, streams::kGradNoise, static_cast<std::uint64_t>(t));
      grads[k_inner - 1] = env.grad_feedback(t, iterates[k_inner - 1], noise);
      trace.rounds.push_back({static_cast<std::int32_t>(q),
                              static_cast<std::int32_t>(k_inner),
                              Phase::kExploit, x_q_feasible, reward});
      if (record_plays) trace.played_points.push_back(x_q);
    }

    MomentumEstimate momentum = MomentumEstimate::zero(d);
    for (long k = 1; k <= K; ++k) {
      momentum =
          momentum_update(momentum, grads[k - 1], rho_schedule_mono(k, K));
      bank.at(k - 1).feed(momentum.d_vec);
    }
  }
  return trace;
}

RegretTrace bandit_fw_run(AdversaryEnv& env, const InteriorSet& interior,
                          OracleBank& bank, const BlockPlan& plan,
                          std::uint64_t seed, bool record_plays) {
  const int d = interior.dim();
  if (env.dim() != d) {
    throw std::invalid_argument("bandit_fw_run: env/set dimension mismatch");
  }
  const long K = plan.K;
  const long L = plan.L;
  if (bank.size() != K) {
    throw std::invalid_argument("bandit_fw_run: bank must hold K oracles");
  }
  if (K > L) throw std::invalid_argument("bandit_fw_run: K must be <= L");
  if (plan.delta != interior.delta()) {
    throw std::invalid_argument(
        "bandit_fw_run: plan delta must match the interior");
  }
  const ConstraintSet& base = interior.base();
  const SmoothingSpec spec{plan.delta, d};
  const Vec lower = interior.lower_bound();

  RegretTrace trace;
  trace.plan = plan;
  const long Q = std::min(plan.Q, env.horizon() / L);
  trace.truncated = Q < plan.Q;
  trace.rounds.reserve(Q * L);

  std::vector<Vec> iterates(K + 1);
  std::vector<Vec> grads(K);
  for (long q = 1; q <= Q; ++q) {
    iterates[0] = lower;
    for (long k = 0; k < K; ++k) {
      const Vec v = bank.at(k).predict();
      iterates[k + 1] = iterates[k] + plan.eta * (v - lower);
    }
    const Vec& x_q = iterates[K];
    const bool x_q_feasible = base.contains(x_q);

    Rng perm_rng =
        Rng::stream(seed, streams::kPermutation, static_cast<std::uint64_t>(q));
    const std::vector<long> slot_label = permutation(L, perm_rng);
    Rng sphere_rng =
        Rng::stream(seed, streams::kSphere, static_cast<std::uint64_t>(q));

    const long start = (q - 1) * L;
    for (long i = 0; i < L; ++i) {
      const long t = start + i + 1;
      if (slot_label[i] <= K) {
        const long k_inner = slot_label[i];
        const OnePointSample s = one_point_grad(
            [&](const Vec& probe) { return env.value_feedback(t, probe); },
            iterates[k_inner - 1], spec, sphere_rng);
        grads[k_inner - 1] = s.grad_estimate;
        trace.rounds.push_back({static_cast<std::int32_t>(q),
                                static_cast<std::int32_t>(k_inner),
                                Phase::kExplore, base.contains(s.probe),
                                s.observed});
        if (record_plays) trace.played_points.push_back(s.probe);
      } else {
        const double reward = env.value_feedback(t, x_q);
        trace.rounds.push_back({static_cast<std::int32_t>(q), 0,
                                Phase::kExploit, x_q_feasible, reward});
        if (record_plays) trace.played_points.push_back(x_q);
      }
    }

    MomentumEstimate momentum = MomentumEstimate::zero(d);
    for (long k = 1; k <= K; ++k) {
      momentum =
          momentum_update(momentum, grads[k - 1], rho_schedule_bandit(k));
      bank.at(k - 1).feed(momentum.d_vec);
    }
  }
  return trace;
}

RegretTrace responsive_fw_run(AdversaryEnv& env, const InteriorSet& interior,
                              OracleBank& bank, const BlockPlan& plan,
                              const Matroid& matroid, std::uint64_t seed,
                              bool record_plays) {
  const int d = interior.dim();
  if (env.dim() != d || matroid.dim() != d) {
    throw std::invalid_argument("responsive_fw_run: dimension mismatch");
  }
  const long K = plan.K;
  const long L = plan.L;
  if (bank.size() != K) {
    throw std::invalid_argument("responsive_fw_run: bank must hold K oracles");
  }
  if (K > L) throw std::invalid_argument("responsive_fw_run: K must be <= L");
  const SmoothingSpec spec{plan.delta, d};
  const Vec lower = interior.lower_bound();

  RegretTrace trace;
  trace.plan = plan;
  const long Q = std::min(plan.Q, env.horizon() / L);
  trace.truncated = Q < plan.Q;
  trace.rounds.reserve(Q * L);

  std::vector<Vec> iterates(K + 1);
  std::vector<Vec> grads(K);
  for (long q = 1; q <= Q; ++q) {
    iterates[0] = lower;
    for (long k = 0; k < K; ++k) {
      const Vec v = bank.at(k).predict();
      iterates[k + 1] = iterates[k] + plan.eta * (v - lower);
    }
    const Vec& x_q = iterates[K];

    Rng perm_rng =
        Rng::stream(seed, streams::kPermutation, static_cast<std::uint64_t>(q));
    const std::vector<long> slot_label = permutation(L, perm_rng);
    Rng sphere_rng =
        Rng::stream(seed, streams::kSphere, static_cast<std::uint64_t>(q));

    const long start = (q - 1) * L;
    for (long i = 0; i < L; ++i) {
      const long t = start + i + 1;
      Rng round_rng =
          Rng::stream(seed, streams::kRounding, static_cast<std::uint64_t>(t));
      if (slot_label[i] <= K) {
        const long k_inner = slot_label[i];
        std::uint64_t played = 0;
        const OnePointSample s = one_point_grad(
            [&](const Vec& probe) {
              played = random_round(probe, round_rng);
              return env.set_value_feedback(t, played);
            },
            iterates[k_inner - 1], spec, sphere_rng);
        // The momentum input keeps the observed value even when the reward
        // is zeroed for a dependent set.
        grads[k_inner - 1] = s.grad_estimate;
        const bool independent = matroid.is_independent(played);
        trace.rounds.push_back({static_cast<std::int32_t>(q),
                                static_cast<std::int32_t>(k_inner),
                                Phase::kExplore, independent,
                                independent ? s.observed : 0.0});
        if (record_plays) trace.played_sets.push_back(played);
      } else {
        const std::uint64_t played = pipage_round(x_q, matroid, round_rng);
        const double reward = env.set_value_feedback(t, played);
        trace.rounds.push_back({static_cast<std::int32_t>(q), 0,
                                Phase::kExploit,
                                matroid.is_independent(played), reward});
        if (record_plays) trace.played_sets.push_back(played);
      }
    }

    MomentumEstimate momentum = MomentumEstimate::zero(d);
    for (long k = 1; k <= K; ++k) {
      momentum =
          momentum_update(momentum, grads[k - 1], rho_schedule_bandit(k));
      bank.at(k - 1).feed(momentum.d_vec);
    }
  }
  return trace;
}

std::vector<double> compute_regret(const RegretTrace& trace,
                                   double benchmark) {
  const auto T = static_cast<double>(trace.rounds.size());
  std::vector<double> curve;
  curve.reserve(trace.rounds.size());
  double cum = 0.0;
  for (std::size_t s = 0; s < trace.rounds.size(); ++s) {
    cum += trace.rounds[s].reward;
    curve.push_back(kOneMinusInvE * benchmark * (static_cast<double>(s + 1) / T) -
                    cum);
  }
  return curve;
}

double final_regret(const RegretTrace& trace, double benchmark) {
  return kOneMinusInvE * benchmark - trace.total_reward();
}

}  // namespace submax
