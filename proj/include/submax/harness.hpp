#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

// vendored nlohmann/json single header
#include <json.hpp>

#include "submax/algorithms.hpp"
#include "submax/objectives.hpp"
#include "submax/oracles.hpp"
#include "submax/rounding.hpp"

namespace submax {

using json = nlohmann::ordered_json;

// Invalid or inconsistent configuration input; maps to CLI exit code 2.
// Precondition failures inside the modules (std::invalid_argument) map to 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class AdversaryMode { kFixed, kIid, kShifting };

struct ObjectiveSpec {
  std::string kind;  // quadratic | linear | coverage | facility_location | modular
  int d{0};
  int universe{0};          // coverage / facility location
  double noise_sigma{0.0};  // quadratic stochastic-gradient noise
  std::uint64_t seed{0};
  std::optional<std::vector<double>> weights;  // explicit linear / modular
};

struct ExperimentConfig {
  std::string algorithm;  // mono_fw | bandit_fw | responsive_fw
  long horizon{0};
  std::uint64_t seed{0};
  std::shared_ptr<const ConstraintSet> constraint;
  ObjectiveSpec objective;
  AdversaryMode mode{AdversaryMode::kFixed};
  long switch_every{0};  // shifting mode block length; 0 = horizon / 2
  OracleKind oracle_kind{OracleKind::kFtpl};
  std::optional<double> oracle_eta0;
  std::optional<double> delta_override;
  std::optional<long> K_override;
  std::optional<long> L_override;
  std::string out_dir;
  std::string prefix;
};

ConstraintSet constraint_from_json(const json& spec);
json constraint_to_json(const ConstraintSet& set);

ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config_file(const std::string& path);

// Adversary over monotone continuous DR-submodular objectives; instances are
// derived deterministically from (seed, instance index), so replays and the
// offline benchmark see the identical sequence. Set-function kinds are
// lifted through their exact multilinear extension.
class ContinuousAdversaryEnv final : public AdversaryEnv {
 public:
  ContinuousAdversaryEnv(ObjectiveSpec spec, AdversaryMode mode,
                         long switch_every, long horizon, std::uint64_t seed,
                         Vec domain_upper);

  int dim() const override { return spec_.d; }
  long horizon() const override { return horizon_; }

  double play(long t, const Vec& played) override;
  Vec grad_feedback(long t, const Vec& at, Rng& rng) override;
  double value_feedback(long t, const Vec& played) override;

  // Offline (benchmark) access; does not touch the feedback counter.
  const ContinuousObjective& objective_at(long t) const;
  double aggregate_value(const Vec& x) const;  // sum_t F_t(x)
  Vec aggregate_grad(const Vec& x) const;
  bool extension_backed() const { return !continuous_kind_; }
  // Sum_t f_t as an explicit table (extension-backed adversaries only).
  const std::vector<double>& aggregate_table() const;

  // Realized assumption constants over the instantiated rounds.
  double L1() const { return l1_; }
  double L2() const { return l2_; }
  double M0() const { return m0_; }
  double M1() const { return m1_; }
  double sigma0() const { return spec_.noise_sigma; }
  std::optional<double> realized_noise_variance() const;

 private:
  long instance_index(long t) const;
  ContinuousObjectivePtr build_instance(long idx) const;
  void observe_constants(const ContinuousObjective& f) const;
  void ensure_aggregate() const;

  ObjectiveSpec spec_;
  AdversaryMode mode_;
  long switch_every_;
  long horizon_;
  std::uint64_t seed_;
  Vec domain_upper_;
  bool continuous_kind_{true};

  mutable long cached_idx_{-1};
  mutable ContinuousObjectivePtr cached_;
  mutable double l1_{0.0}, l2_{0.0}, m0_{0.0}, m1_{0.0};
  mutable bool aggregate_ready_{false};
  mutable Vec agg_h_;           // quadratic family
  mutable Mat agg_H_;
  mutable std::vector<double> agg_table_;  // extension family
  double noise_sq_sum_{0.0};
  long noise_samples_{0};
};

// Adversary over monotone submodular set functions (responsive model).
class SetAdversaryEnv final : public AdversaryEnv {
 public:
  SetAdversaryEnv(ObjectiveSpec spec, AdversaryMode mode, long switch_every,
                  long horizon, std::uint64_t seed);

  int dim() const override { return spec_.d; }
  long horizon() const override { return horizon_; }

  double set_value_feedback(long t, std::uint64_t played) override;

  const SetObjective& set_objective_at(long t) const;
  const std::vector<double>& aggregate_table() const;  // sum_t f_t
  double M1() const { return m1_; }

 private:
  long instance_index(long t) const;
  SetObjectivePtr build_instance(long idx) const;

  ObjectiveSpec spec_;
  AdversaryMode mode_;
  long switch_every_;
  long horizon_;
  std::uint64_t seed_;

  mutable long cached_idx_{-1};
  mutable SetObjectivePtr cached_;
  mutable double m1_{0.0};
  mutable bool aggregate_ready_{false};
  mutable std::vector<double> agg_table_;
};

struct BenchmarkResult {
  double value{0.0};
  std::string mode;  // exhaustive_sets | box_corner_exact | grid | fw_lower_bound
};

// max_{x in set} sum_t F_t(x), by the exact route available for the
// constraint/adversary pair; falls back to an offline-FW lower bound and
// flags the mode so regret readers can treat those figures as conservative.
BenchmarkResult compute_benchmark(const ContinuousAdversaryEnv& env,
                                  const ConstraintSet& set);
BenchmarkResult compute_benchmark(const SetAdversaryEnv& env,
                                  const Matroid& matroid);

struct PlotSeries {
  std::string label;
  std::vector<double> regret;  // cumulative regret per round
};

struct SlopeFit {
  std::string label;
  double slope;
  bool valid;  // false when too few positive regret points to fit
};

// Log-log regret curves with fitted slopes annotated; optionally writes the
// slope table as CSV.
std::vector<SlopeFit> emit_plot(
    const std::vector<PlotSeries>& traces, const std::string& svg_path,
    const std::optional<std::string>& slope_csv_path = std::nullopt);

struct RunResult {
  json summary;
  std::string trace_csv_path;
  std::string summary_json_path;
  std::string svg_path;
};

void write_trace_csv(const RegretTrace& trace, double benchmark,
                     const std::string& path);

// Derives parameters, runs the configured algorithm, computes the benchmark
// and regret, and writes trace CSV + summary JSON + regret SVG.
RunResult run_experiment(const ExperimentConfig& config);

// Benchmark-only entry point (CLI `bench`).
json bench_only(const ExperimentConfig& config);

json list_families();

}  // namespace submax
