#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iterator>
#include <limits>
#include <fstream>

#include "submax/harness.hpp"

namespace submax {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SlopeEstimate {
  double slope;
  bool valid;
};

// Least-squares slope of log10(regret) vs log10(t) over the positive tail.
SlopeEstimate fit_loglog_slope(const std::vector<double>& regret) {
  const std::size_t n = regret.size();
  std::vector<std::pair<double, double>> pts;
  const std::size_t start = std::max<std::size_t>(1, n / 5);
  for (std::size_t i = start; i < n; ++i) {
    if (regret[i] > 0.0) {
      pts.emplace_back(std::log10(static_cast<double>(i + 1)),
                       std::log10(regret[i]));
    }
  }
  if (pts.size() < 2) return {0.0, false};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double denom = m * sxx - sx * sx;
  if (denom <= 0.0) return {0.0, false};
  return {(m * sxy - sx * sy) / denom, true};
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_trace_csv(const RegretTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,block,phase,reward,cum_reward,feasible\n";
  double cum = 0.0;
  long t = 0;
  for (const auto& r : trace.rounds) {
    ++t;
    cum += r.reward;
    out << t << ',' << r.block << ','
        << (r.phase == Phase::kExplore ? "explore" : "exploit") << ','
        << fmt_double(r.reward) << ',' << fmt_double(cum) << ','
        << (r.feasible ? 1 : 0) << '\n';
  }
}

std::vector<SlopeFit> emit_plot(const std::vector<PlotSeries>& traces,
                                const std::string& svg_path,
                                const std::optional<std::string>& slope_csv_path) {
  if (traces.empty()) {
    throw std::invalid_argument("emit_plot: need at least one trace");
  }
  const double width = 720, height = 480;
  const double ml = 70, mr = 20, mt = 30, mb = 50;

  double tmax = 1.0;
  double rmin_pos = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (const auto& s : traces) {
    tmax = std::max(tmax, static_cast<double>(s.regret.size()));
    for (double r : s.regret) {
      if (r > 0.0) {
        rmin_pos = std::min(rmin_pos, r);
        rmax = std::max(rmax, r);
      }
    }
  }
  // Degenerate all-nonpositive traces sit on the plot floor.
  if (!std::isfinite(rmin_pos)) {
    rmin_pos = 1e-3;
    rmax = 1.0;
  }
  const double floor_val = rmin_pos / 10.0;
  const double lx0 = 0.0, lx1 = std::log10(tmax);
  const double ly0 = std::log10(floor_val);
  const double ly1 = std::log10(std::max(rmax, floor_val * 10));

  auto px = [&](double lt) {
    return ml + (lt - lx0) / std::max(1e-12, lx1 - lx0) * (width - ml - mr);
  };
  auto py = [&](double lr) {
    return height - mb -
           (lr - ly0) / std::max(1e-12, ly1 - ly0) * (height - mt - mb);
  };

  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + svg_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2
      << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">cumulative "
         "(1-1/e)-regret vs round (log-log)</text>\n";

  // Decade ticks.
  for (int e = 0; e <= static_cast<int>(std::ceil(lx1)); ++e) {
    const double x = px(e);
    out << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x
        << "\" y2=\"" << height - mb << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::floor(ly0));
       e <= static_cast<int>(std::ceil(ly1)); ++e) {
    const double y = py(e);
    if (y < mt || y > height - mb) continue;
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\">1e" << e << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\""
      << width - ml - mr << "\" height=\"" << height - mt - mb
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  std::vector<SlopeFit> fits;
  for (std::size_t si = 0; si < traces.size(); ++si) {
    const auto& s = traces[si];
    const char* color = kPalette[si % std::size(kPalette)];
    const std::size_t n = s.regret.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      const double r = std::max(s.regret[i], floor_val);
      out << px(std::log10(static_cast<double>(i + 1))) << ','
          << py(std::log10(r)) << ' ';
    }
    const double rlast = std::max(s.regret.back(), floor_val);
    out << px(std::log10(static_cast<double>(n))) << ','
        << py(std::log10(rlast));
    out << "\"/>\n";

    const SlopeEstimate fit = fit_loglog_slope(s.regret);
    fits.push_back({s.label, fit.slope, fit.valid});
    char slope_txt[64];
    if (fit.valid) {
      std::snprintf(slope_txt, sizeof(slope_txt), "%s (slope %.3f)",
                    s.label.c_str(), fit.slope);
    } else {
      std::snprintf(slope_txt, sizeof(slope_txt), "%s (slope n/a)",
                    s.label.c_str());
    }
    out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 18 + 16 * si
        << "\" font-size=\"12\" fill=\"" << color << "\">" << slope_txt
        << "</text>\n";
  }
  out << "</svg>\n";

  if (slope_csv_path) {
    std::ofstream csv(*slope_csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + *slope_csv_path);
    csv << "label,slope,valid\n";
    for (const auto& f : fits) {
      csv << f.label << ',' << fmt_double(f.slope) << ',' << (f.valid ? 1 : 0)
          << '\n';
    }
  }
  return fits;
}

namespace {

BlockPlan mono_plan_with_overrides(const ExperimentConfig& cfg) {
  if (!cfg.K_override) return derive_params_mono(cfg.horizon);
  const long K = *cfg.K_override;
  if (K < 2 || K % 2 != 0) {
    throw std::invalid_argument("mono_fw K override must be even and >= 2");
  }
  if (K > cfg.horizon) {
    throw std::invalid_argument("mono_fw K override exceeds the horizon");
  }
  BlockPlan plan;
  plan.K = K;
  plan.L = K;
  plan.Q = cfg.horizon / K;
  plan.T_effective = plan.Q * K;
  plan.eta = 1.0 / static_cast<double>(K);
  plan.delta = 0.0;
  return plan;
}

json plan_to_json(const BlockPlan& plan, double alpha) {
  json j;
  j["Q"] = plan.Q;
  j["K"] = plan.K;
  j["L"] = plan.L;
  j["eta"] = plan.eta;
  j["delta"] = plan.delta;
  j["alpha"] = alpha;
  return j;
}

json objective_to_json(const ObjectiveSpec& spec) {
  json j;
  j["kind"] = spec.kind;
  j["d"] = spec.d;
  j["universe"] = spec.universe;
  j["noise_sigma"] = spec.noise_sigma;
  j["seed"] = spec.seed;
  if (spec.weights) j["weights"] = *spec.weights;
  return j;
}

const char* mode_name(AdversaryMode m) {
  switch (m) {
    case AdversaryMode::kFixed: return "fixed";
    case AdversaryMode::kIid: return "iid";
    case AdversaryMode::kShifting: return "shifting";
  }
  return "fixed";
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const ConstraintSet& set = *cfg.constraint;
  Vec domain_upper = set.family() == Family::kBox
                         ? set.box_upper()
                         : Vec::Ones(set.dim());

  BlockPlan plan;
  double alpha = 0.0;
  std::optional<InteriorSet> interior;
  if (cfg.algorithm == "mono_fw") {
    plan = mono_plan_with_overrides(cfg);
  } else {
    auto [p, inner] = derive_params_bandit(cfg.horizon, set,
                                           cfg.delta_override, cfg.K_override,
                                           cfg.L_override);
    plan = p;
    alpha = inner.alpha();
    interior.emplace(std::move(inner));
  }

  RegretTrace trace;
  BenchmarkResult benchmark;
  long queries = 0;
  json constants;
  std::unique_ptr<ContinuousAdversaryEnv> cont_env;
  std::unique_ptr<SetAdversaryEnv> set_env;

  if (cfg.algorithm == "responsive_fw") {
    const Matroid matroid = matroid_from_constraint(set);
    set_env = std::make_unique<SetAdversaryEnv>(
        cfg.objective, cfg.mode, cfg.switch_every, plan.T_effective, cfg.seed);
    OracleBank bank(cfg.oracle_kind, plan.K, *interior, cfg.seed,
                    cfg.oracle_eta0);
    trace = responsive_fw_run(*set_env, *interior, bank, plan, matroid,
                              cfg.seed);
    benchmark = compute_benchmark(*set_env, matroid);
    queries = set_env->feedback_queries();
    constants["M1"] = set_env->M1();
    const auto [l1, l2] =
        lipschitz_smoothness_of_extension(set_env->M1(), set.dim());
    constants["L1"] = l1;
    constants["L2"] = l2;
  } else {
    cont_env = std::make_unique<ContinuousAdversaryEnv>(
        cfg.objective, cfg.mode, cfg.switch_every, plan.T_effective, cfg.seed,
        domain_upper);
    if (cfg.algorithm == "mono_fw") {
      OracleBank bank(cfg.oracle_kind, plan.K, set, cfg.seed, cfg.oracle_eta0);
      trace = mono_fw_run(*cont_env, set, bank, plan, cfg.seed);
    } else {
      OracleBank bank(cfg.oracle_kind, plan.K, *interior, cfg.seed,
                      cfg.oracle_eta0);
      trace = bandit_fw_run(*cont_env, *interior, bank, plan, cfg.seed);
    }
    benchmark = compute_benchmark(*cont_env, set);
    queries = cont_env->feedback_queries();
    constants["L1"] = cont_env->L1();
    constants["L2"] = cont_env->L2();
    constants["M0"] = cont_env->M0();
    constants["M1"] = cont_env->M1();
    constants["sigma0"] = cont_env->sigma0();
    if (auto rv = cont_env->realized_noise_variance()) {
      constants["sigma0_sq_realized"] = *rv;
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  const std::string base = cfg.out_dir + "/" + cfg.prefix;
  RunResult result;
  result.trace_csv_path = base + "_trace.csv";
  result.summary_json_path = base + "_summary.json";
  result.svg_path = base + "_regret.svg";

  write_trace_csv(trace, result.trace_csv_path);
  const std::vector<double> curve = compute_regret(trace, benchmark.value);
  emit_plot({{cfg.algorithm, curve}}, result.svg_path);

  const auto t_end = std::chrono::steady_clock::now();
  json summary;
  summary["algorithm"] = cfg.algorithm;
  summary["seed"] = cfg.seed;
  summary["horizon_requested"] = cfg.horizon;
  summary["horizon_effective"] = plan.T_effective;
  summary["params"] = plan_to_json(plan, alpha);
  summary["constraint"] = constraint_to_json(set);
  summary["objective"] = objective_to_json(cfg.objective);
  summary["adversary"] = {{"mode", mode_name(cfg.mode)},
                          {"switch_every", cfg.switch_every}};
  summary["oracle"] = {{"kind", oracle_kind_name(cfg.oracle_kind)},
                       {"eta0", cfg.oracle_eta0 ? json(*cfg.oracle_eta0)
                                                : json(nullptr)}};
  summary["constants"] = constants;
  summary["benchmark"] = {{"value", benchmark.value},
                          {"mode", benchmark.mode}};
  summary["total_reward"] = trace.total_reward();
  summary["final_regret"] = final_regret(trace, benchmark.value);
  summary["feasible_all"] = trace.all_feasible();
  summary["feedback_queries"] = queries;
  summary["truncated"] = trace.truncated;
  summary["rng"] = {{"name", Rng::kName}, {"version", Rng::kVersion}};
  summary["files"] = {{"trace", result.trace_csv_path},
                      {"summary", result.summary_json_path},
                      {"svg", result.svg_path}};
  summary["wall_clock_sec"] =
      std::chrono::duration<double>(t_end - t_start).count();

  std::ofstream out(result.summary_json_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + result.summary_json_path);
  }
  out << summary.dump(2) << '\n';
  result.summary = std::move(summary);
  return result;
}

json bench_only(const ExperimentConfig& cfg) {
  const ConstraintSet& set = *cfg.constraint;
  Vec domain_upper = set.family() == Family::kBox
                         ? set.box_upper()
                         : Vec::Ones(set.dim());
  BlockPlan plan;
  if (cfg.algorithm == "mono_fw") {
    plan = mono_plan_with_overrides(cfg);
  } else {
    plan = derive_params_bandit(cfg.horizon, set, cfg.delta_override,
                                cfg.K_override, cfg.L_override)
               .first;
  }
  BenchmarkResult benchmark;
  if (cfg.algorithm == "responsive_fw") {
    SetAdversaryEnv env(cfg.objective, cfg.mode, cfg.switch_every,
                        plan.T_effective, cfg.seed);
    benchmark = compute_benchmark(env, matroid_from_constraint(set));
  } else {
    ContinuousAdversaryEnv env(cfg.objective, cfg.mode, cfg.switch_every,
                               plan.T_effective, cfg.seed, domain_upper);
    benchmark = compute_benchmark(env, set);
  }
  json out;
  out["horizon_effective"] = plan.T_effective;
  out["benchmark"] = {{"value", benchmark.value}, {"mode", benchmark.mode}};
  return out;
}

}  // namespace submax
