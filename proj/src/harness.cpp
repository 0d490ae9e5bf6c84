#include "submax/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace submax {

namespace {

json get_or(const json& doc, const char* key, json fallback) {
  return doc.contains(key) && !doc.at(key).is_null() ? doc.at(key)
                                                     : std::move(fallback);
}

template <class T>
std::optional<T> opt_field(const json& doc, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return doc.at(key).get<T>();
}

[[noreturn]] void config_fail(const std::string& msg) {
  throw ConfigError("config error: " + msg);
}

}  // namespace

ConstraintSet constraint_from_json(const json& spec) {
  if (!spec.is_object() || !spec.contains("family")) {
    config_fail("constraint must be an object with a \"family\" field");
  }
  const std::string family = spec.at("family").get<std::string>();
  try {
    if (family == "box") {
      if (spec.contains("upper")) {
        const auto upper = spec.at("upper").get<std::vector<double>>();
        return ConstraintSet::box(
            Eigen::Map<const Vec>(upper.data(), upper.size()));
      }
      const int d = spec.at("dim").get<int>();
      return ConstraintSet::box(Vec::Ones(d));
    }
    if (family == "scaled_simplex") {
      return ConstraintSet::scaled_simplex(spec.at("budget").get<double>(),
                                           spec.at("dim").get<int>());
    }
    if (family == "uniform_matroid") {
      return ConstraintSet::uniform_matroid(spec.at("rank").get<int>(),
                                            spec.at("dim").get<int>());
    }
    if (family == "partition_matroid") {
      return ConstraintSet::partition_matroid(
          spec.at("parts").get<std::vector<int>>(),
          spec.at("caps").get<std::vector<int>>());
    }
  } catch (const json::exception& e) {
    config_fail("bad constraint spec: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    config_fail("bad constraint spec: " + std::string(e.what()));
  }
  config_fail("unknown constraint family \"" + family + "\"");
}

json constraint_to_json(const ConstraintSet& set) {
  json out;
  out["family"] = family_name(set.family());
  out["dim"] = set.dim();
  switch (set.family()) {
    case Family::kBox: {
      const Vec& u = set.box_upper();
      out["upper"] = std::vector<double>(u.data(), u.data() + u.size());
      break;
    }
    case Family::kScaledSimplex:
      out["budget"] = set.simplex_budget();
      break;
    case Family::kUniformMatroid:
      out["rank"] = set.matroid_rank();
      break;
    case Family::kPartitionMatroid:
      out["parts"] = set.part_of();
      out["caps"] = set.caps();
      break;
  }
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_fail("top-level config must be a JSON object");
  ExperimentConfig cfg;

  cfg.algorithm = get_or(doc, "algorithm", "").get<std::string>();
  if (cfg.algorithm != "mono_fw" && cfg.algorithm != "bandit_fw" &&
      cfg.algorithm != "responsive_fw") {
    config_fail("algorithm must be one of mono_fw, bandit_fw, responsive_fw");
  }
  if (!doc.contains("horizon")) config_fail("missing \"horizon\"");
  cfg.horizon = doc.at("horizon").get<long>();
  if (cfg.horizon < 1) config_fail("horizon must be >= 1");
  cfg.seed = get_or(doc, "seed", 1).get<std::uint64_t>();

  if (!doc.contains("constraint")) config_fail("missing \"constraint\"");
  cfg.constraint = std::make_shared<const ConstraintSet>(
      constraint_from_json(doc.at("constraint")));

  if (!doc.contains("objective")) config_fail("missing \"objective\"");
  const json& obj = doc.at("objective");
  cfg.objective.kind = get_or(obj, "kind", "").get<std::string>();
  const bool set_kind = cfg.objective.kind == "coverage" ||
                        cfg.objective.kind == "facility_location" ||
                        cfg.objective.kind == "modular";
  if (!set_kind && cfg.objective.kind != "quadratic" &&
      cfg.objective.kind != "linear") {
    config_fail("objective kind must be one of quadratic, linear, coverage, "
                "facility_location, modular");
  }
  cfg.objective.weights = opt_field<std::vector<double>>(obj, "weights");
  cfg.objective.d = cfg.objective.weights
                        ? static_cast<int>(cfg.objective.weights->size())
                        : get_or(obj, "d", cfg.constraint->dim()).get<int>();
  if (cfg.objective.d != cfg.constraint->dim()) {
    config_fail("objective dimension must match the constraint dimension");
  }
  cfg.objective.universe =
      get_or(obj, "universe", std::min(64, 4 * cfg.objective.d)).get<int>();
  cfg.objective.noise_sigma = get_or(obj, "noise_sigma", 0.0).get<double>();
  if (cfg.objective.noise_sigma < 0.0) config_fail("noise_sigma must be >= 0");
  cfg.objective.seed =
      get_or(obj, "seed", cfg.seed).get<std::uint64_t>();

  if (cfg.algorithm == "responsive_fw") {
    if (!set_kind) {
      config_fail("responsive_fw requires a set-function objective");
    }
    const Family fam = cfg.constraint->family();
    if (fam != Family::kUniformMatroid && fam != Family::kPartitionMatroid) {
      config_fail("responsive_fw requires a matroid polytope constraint");
    }
  }
  if (set_kind && cfg.constraint->family() == Family::kBox &&
      (cfg.constraint->box_upper().array() > 1.0 + 1e-12).any()) {
    config_fail("set-function objectives live on [0,1]^d; box upper bounds "
                "must not exceed 1");
  }

  const json adv = get_or(doc, "adversary", json::object());
  const std::string mode = get_or(adv, "mode", "fixed").get<std::string>();
  if (mode == "fixed") {
    cfg.mode = AdversaryMode::kFixed;
  } else if (mode == "iid") {
    cfg.mode = AdversaryMode::kIid;
  } else if (mode == "shifting") {
    cfg.mode = AdversaryMode::kShifting;
  } else {
    config_fail("adversary mode must be fixed, iid, or shifting");
  }
  cfg.switch_every = get_or(adv, "switch_every", 0).get<long>();
  if (cfg.switch_every < 0) config_fail("switch_every must be >= 0");

  const json oracle = get_or(doc, "oracle", json::object());
  const std::string okind = get_or(oracle, "kind", "ftpl").get<std::string>();
  if (okind == "ftpl") {
    cfg.oracle_kind = OracleKind::kFtpl;
  } else if (okind == "ogd") {
    cfg.oracle_kind = OracleKind::kOgd;
  } else {
    config_fail("oracle kind must be ftpl or ogd");
  }
  cfg.oracle_eta0 = opt_field<double>(oracle, "eta0");
  if (cfg.oracle_eta0 && *cfg.oracle_eta0 <= 0.0) {
    config_fail("oracle eta0 must be > 0");
  }

  const json overrides = get_or(doc, "overrides", json::object());
  cfg.delta_override = opt_field<double>(overrides, "delta");
  cfg.K_override = opt_field<long>(overrides, "K");
  cfg.L_override = opt_field<long>(overrides, "L");

  const json output = get_or(doc, "output", json::object());
  const char* env_out = std::getenv("SUBMAX_OUT");
  cfg.out_dir =
      get_or(output, "dir", env_out ? env_out : ".").get<std::string>();
  cfg.prefix = get_or(output, "prefix", cfg.algorithm).get<std::string>();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_fail("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    config_fail("invalid JSON in " + path + ": " + e.what());
  }
  return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Continuous adversary
// ---------------------------------------------------------------------------

ContinuousAdversaryEnv::ContinuousAdversaryEnv(ObjectiveSpec spec,
                                               AdversaryMode mode,
                                               long switch_every, long horizon,
                                               std::uint64_t seed,
                                               Vec domain_upper)
    : spec_(std::move(spec)),
      mode_(mode),
      switch_every_(switch_every > 0 ? switch_every
                                     : std::max<long>(1, horizon / 2)),
      horizon_(horizon),
      seed_(seed),
      domain_upper_(std::move(domain_upper)) {
  continuous_kind_ =
      spec_.kind == "quadratic" || spec_.kind == "linear";
}

long ContinuousAdversaryEnv::instance_index(long t) const {
  switch (mode_) {
    case AdversaryMode::kFixed: return 0;
    case AdversaryMode::kIid: return t;
    case AdversaryMode::kShifting: return (t - 1) / switch_every_;
  }
  return 0;
}

ContinuousObjectivePtr ContinuousAdversaryEnv::build_instance(long idx) const {
  Rng rng = Rng::stream(spec_.seed, streams::kAdversary,
                        static_cast<std::uint64_t>(idx));
  if (spec_.kind == "quadratic") {
    return std::make_shared<QuadraticDR>(QuadraticDR::random(
        spec_.d, domain_upper_, spec_.noise_sigma, rng));
  }
  if (spec_.kind == "linear") {
    Vec c(spec_.d);
    if (spec_.weights) {
      for (int i = 0; i < spec_.d; ++i) c[i] = (*spec_.weights)[i];
    } else {
      for (int i = 0; i < spec_.d; ++i) c[i] = rng.uniform01();
    }
    return std::make_shared<QuadraticDR>(
        QuadraticDR::linear(std::move(c), domain_upper_));
  }
  // Set-function kinds lift through the exact multilinear extension.
  SetObjectivePtr f;
  if (spec_.kind == "coverage") {
    f = make_random_set_objective(SetObjectiveKind::kCoverage, spec_.d,
                                  spec_.universe, rng);
  } else if (spec_.kind == "facility_location") {
    f = make_random_set_objective(SetObjectiveKind::kFacilityLocation,
                                  spec_.d, spec_.universe, rng);
  } else if (spec_.kind == "modular") {
    Vec w(spec_.d);
    if (spec_.weights) {
      for (int i = 0; i < spec_.d; ++i) w[i] = (*spec_.weights)[i];
    } else {
      for (int i = 0; i < spec_.d; ++i) w[i] = rng.uniform01();
    }
    f = std::make_shared<ModularObjective>(std::move(w));
  } else {
    throw ConfigError("unsupported continuous objective kind: " + spec_.kind);
  }
  return std::make_shared<MultilinearExtension>(std::move(f));
}

void ContinuousAdversaryEnv::observe_constants(
    const ContinuousObjective& f) const {
  l1_ = std::max(l1_, f.lipschitz());
  l2_ = std::max(l2_, f.smoothness());
  m0_ = std::max(m0_, f.stoch_grad_bound());
  m1_ = std::max(m1_, f.value_bound());
}

const ContinuousObjective& ContinuousAdversaryEnv::objective_at(long t) const {
  if (t < 1 || t > horizon_) {
    throw std::out_of_range("objective_at: round out of range");
  }
  const long idx = instance_index(t);
  if (idx != cached_idx_) {
    cached_ = build_instance(idx);
    cached_idx_ = idx;
    observe_constants(*cached_);
  }
  return *cached_;
}

double ContinuousAdversaryEnv::play(long t, const Vec& played) {
  note_play(t);
  return objective_at(t).value(played);
}

Vec ContinuousAdversaryEnv::grad_feedback(long t, const Vec& at, Rng& rng) {
  consume_feedback(t);
  const ContinuousObjective& f = objective_at(t);
  Vec g = f.stoch_grad(at, rng);
  if (spec_.noise_sigma > 0.0 && continuous_kind_) {
    noise_sq_sum_ += (g - f.grad(at)).squaredNorm();
    ++noise_samples_;
  }
  return g;
}

double ContinuousAdversaryEnv::value_feedback(long t, const Vec& played) {
  note_play(t);
  consume_feedback(t);
  return objective_at(t).value(played);
}

std::optional<double> ContinuousAdversaryEnv::realized_noise_variance() const {
  if (noise_samples_ == 0) return std::nullopt;
  return noise_sq_sum_ / static_cast<double>(noise_samples_);
}

void ContinuousAdversaryEnv::ensure_aggregate() const {
  if (aggregate_ready_) return;
  if (continuous_kind_) {
    agg_h_ = Vec::Zero(spec_.d);
    agg_H_ = Mat::Zero(spec_.d, spec_.d);
    for (long t = 1; t <= horizon_; ++t) {
      const auto* q =
          dynamic_cast<const QuadraticDR*>(&objective_at(t));
      agg_h_ += q->h();
      agg_H_ += q->H();
    }
  } else {
    if (spec_.d > 20) {
      throw ConfigError(
          "aggregate benchmark unavailable for set-backed objectives with "
          "d > 20");
    }
    agg_table_.assign(1ULL << spec_.d, 0.0);
    for (long t = 1; t <= horizon_; ++t) {
      const auto* ext =
          dynamic_cast<const MultilinearExtension*>(&objective_at(t));
      const SetObjective& f = ext->base();
      for (std::uint64_t s = 0; s < agg_table_.size(); ++s) {
        agg_table_[s] += f.value(s);
      }
    }
  }
  aggregate_ready_ = true;
}

double ContinuousAdversaryEnv::aggregate_value(const Vec& x) const {
  ensure_aggregate();
  if (continuous_kind_) {
    return agg_h_.dot(x) + 0.5 * x.dot(agg_H_ * x);
  }
  const TableObjective agg(spec_.d, agg_table_);
  return MultilinearExtension(std::make_shared<TableObjective>(agg)).value(x);
}

Vec ContinuousAdversaryEnv::aggregate_grad(const Vec& x) const {
  ensure_aggregate();
  if (continuous_kind_) {
    return agg_h_ + agg_H_ * x;
  }
  const TableObjective agg(spec_.d, agg_table_);
  return MultilinearExtension(std::make_shared<TableObjective>(agg)).grad(x);
}

const std::vector<double>& ContinuousAdversaryEnv::aggregate_table() const {
  if (continuous_kind_) {
    throw std::logic_error("aggregate_table: adversary is not set-backed");
  }
  ensure_aggregate();
  return agg_table_;
}

// ---------------------------------------------------------------------------
// Set-function adversary (responsive model)
// ---------------------------------------------------------------------------

SetAdversaryEnv::SetAdversaryEnv(ObjectiveSpec spec, AdversaryMode mode,
                                 long switch_every, long horizon,
                                 std::uint64_t seed)
    : spec_(std::move(spec)),
      mode_(mode),
      switch_every_(switch_every > 0 ? switch_every
                                     : std::max<long>(1, horizon / 2)),
      horizon_(horizon),
      seed_(seed) {
  if (spec_.kind != "coverage" && spec_.kind != "facility_location" &&
      spec_.kind != "modular") {
    throw ConfigError("set adversary requires a set-function objective kind");
  }
}

long SetAdversaryEnv::instance_index(long t) const {
  switch (mode_) {
    case AdversaryMode::kFixed: return 0;
    case AdversaryMode::kIid: return t;
    case AdversaryMode::kShifting: return (t - 1) / switch_every_;
  }
  return 0;
}

SetObjectivePtr SetAdversaryEnv::build_instance(long idx) const {
  Rng rng = Rng::stream(spec_.seed, streams::kAdversary,
                        static_cast<std::uint64_t>(idx));
  if (spec_.kind == "coverage") {
    return make_random_set_objective(SetObjectiveKind::kCoverage, spec_.d,
                                     spec_.universe, rng);
  }
  if (spec_.kind == "facility_location") {
    return make_random_set_objective(SetObjectiveKind::kFacilityLocation,
                                     spec_.d, spec_.universe, rng);
  }
  Vec w(spec_.d);
  if (spec_.weights) {
    for (int i = 0; i < spec_.d; ++i) w[i] = (*spec_.weights)[i];
  } else {
    for (int i = 0; i < spec_.d; ++i) w[i] = rng.uniform01();
  }
  return std::make_shared<ModularObjective>(std::move(w));
}

const SetObjective& SetAdversaryEnv::set_objective_at(long t) const {
  if (t < 1 || t > horizon_) {
    throw std::out_of_range("set_objective_at: round out of range");
  }
  const long idx = instance_index(t);
  if (idx != cached_idx_) {
    cached_ = build_instance(idx);
    cached_idx_ = idx;
    m1_ = std::max(m1_, cached_->value_bound());
  }
  return *cached_;
}

double SetAdversaryEnv::set_value_feedback(long t, std::uint64_t played) {
  note_play(t);
  consume_feedback(t);
  return set_objective_at(t).value(played);
}

const std::vector<double>& SetAdversaryEnv::aggregate_table() const {
  if (!aggregate_ready_) {
    if (spec_.d > 16) {
      throw ConfigError(
          "exhaustive benchmark unavailable for set adversaries with d > 16");
    }
    agg_table_.assign(1ULL << spec_.d, 0.0);
    for (long t = 1; t <= horizon_; ++t) {
      const SetObjective& f = set_objective_at(t);
      for (std::uint64_t s = 0; s < agg_table_.size(); ++s) {
        agg_table_[s] += f.value(s);
      }
    }
    aggregate_ready_ = true;
  }
  return agg_table_;
}

// ---------------------------------------------------------------------------
// Benchmarks
// ---------------------------------------------------------------------------

namespace {

// Coarse-to-fine grid maximization for d <= 3; resolution refined to 1e-3.
double grid_maximize(const std::function<double(const Vec&)>& value,
                     const ConstraintSet& set) {
  const int d = set.dim();
  Vec upper;
  if (set.family() == Family::kBox) {
    upper = set.box_upper();
  } else {
    upper = Vec::Ones(d);
  }
  Vec lo = Vec::Zero(d), hi = upper;
  Vec best_x = Vec::Zero(d);
  double best = value(best_x);
  const int npts = 11;
  double step = (hi - lo).maxCoeff() / (npts - 1);
  while (true) {
    std::vector<int> counter(d, 0);
    Vec steps = (hi - lo) / (npts - 1);
    while (true) {
      Vec p(d);
      for (int i = 0; i < d; ++i) p[i] = lo[i] + counter[i] * steps[i];
      if (set.contains(p, 1e-9)) {
        const double v = value(p);
        if (v > best) {
          best = v;
          best_x = p;
        }
      }
      int i = 0;
      for (; i < d; ++i) {
        if (++counter[i] < npts) break;
        counter[i] = 0;
      }
      if (i == d) break;
    }
    if (step <= 1e-3) break;
    for (int i = 0; i < d; ++i) {
      lo[i] = std::max(0.0, best_x[i] - steps[i]);
      hi[i] = std::min(upper[i], best_x[i] + steps[i]);
    }
    step = (hi - lo).maxCoeff() / (npts - 1);
  }
  return best;
}

double exhaustive_independent_max(const std::vector<double>& table,
                                  const Matroid& matroid) {
  double best = 0.0;
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    if (table[s] > best && matroid.is_independent(s)) best = table[s];
  }
  return best;
}

}  // namespace

BenchmarkResult compute_benchmark(const ContinuousAdversaryEnv& env,
                                  const ConstraintSet& set) {
  const Family fam = set.family();
  if (env.extension_backed() &&
      (fam == Family::kUniformMatroid || fam == Family::kPartitionMatroid)) {
    if (set.dim() <= 16) {
      // Lossless rounding makes the polytope max equal the best independent
      // set of the aggregate.
      const Matroid m = matroid_from_constraint(set);
      return {exhaustive_independent_max(env.aggregate_table(), m),
              "exhaustive_sets"};
    }
  }
  if (fam == Family::kBox) {
    // Monotone objectives peak at the top corner of a box.
    return {env.aggregate_value(set.box_upper()), "box_corner_exact"};
  }
  if (set.dim() <= 3) {
    return {grid_maximize([&](const Vec& x) { return env.aggregate_value(x); },
                          set),
            "grid"};
  }
  const Vec x = offline_fw(
      [&](const Vec& p) { return env.aggregate_grad(p); }, set, 10000);
  return {env.aggregate_value(x), "fw_lower_bound"};
}

BenchmarkResult compute_benchmark(const SetAdversaryEnv& env,
                                  const Matroid& matroid) {
  return {exhaustive_independent_max(env.aggregate_table(), matroid),
          "exhaustive_sets"};
}

json list_families() {
  json out;
  out["algorithms"] = {"mono_fw", "bandit_fw", "responsive_fw"};
  out["constraint_families"] = {"box", "scaled_simplex", "uniform_matroid",
                                "partition_matroid"};
  out["objective_kinds"] = {"quadratic", "linear", "coverage",
                            "facility_location", "modular"};
  out["adversary_modes"] = {"fixed", "iid", "shifting"};
  out["oracle_kinds"] = {"ftpl", "ogd"};
  return out;
}

}  // namespace submax
