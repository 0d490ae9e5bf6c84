#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "submax/harness.hpp"

namespace {

// Exit codes: 0 ok, 2 config error, 3 precondition error.
int guarded(const std::function<int()>& body, bool quiet) {
  try {
    return body();
  } catch (const submax::ConfigError& e) {
    submax::json err = {{"error", e.what()}, {"exit_code", 2}};
    std::cout << err.dump() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    submax::json err = {{"error", e.what()}, {"exit_code", 3}};
    std::cout << err.dump() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

submax::ExperimentConfig load_with_flags(const std::string& path,
                                         const std::string& out_dir,
                                         long long seed, bool has_seed) {
  submax::ExperimentConfig cfg = submax::load_config_file(path);
  if (has_seed) cfg.seed = static_cast<std::uint64_t>(seed);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online Frank-Wolfe harness for monotone DR-submodular and "
               "submodular-set maximization"};
  app.require_subcommand(1);

  bool quiet = false;
  std::string out_dir;
  long long seed = 0;
  bool has_seed = false;
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.add_option("--out-dir", out_dir, "output directory (overrides config)");
  auto* seed_opt =
      app.add_option("--seed", seed, "root seed (overrides config)");

  std::string run_config, bench_config;
  auto* run_cmd =
      app.add_subcommand("run", "run an experiment from a JSON config");
  run_cmd->add_option("config", run_config, "path to config.json")->required();

  auto* bench_cmd = app.add_subcommand(
      "bench", "compute the benchmark for a config without running");
  bench_cmd->add_option("config", bench_config, "path to config.json")
      ->required();

  auto* demo_cmd = app.add_subcommand(
      "demo-impossibility",
      "show that no function-independent unbiased rounding scheme exists");

  auto* list_cmd =
      app.add_subcommand("list-families", "list supported config families");

  CLI11_PARSE(app, argc, argv);
  has_seed = seed_opt->count() > 0;

  if (run_cmd->parsed()) {
    return guarded(
        [&] {
          const auto cfg =
              load_with_flags(run_config, out_dir, seed, has_seed);
          const submax::RunResult result = submax::run_experiment(cfg);
          if (!quiet) {
            std::cout << result.summary.dump(2) << std::endl;
          }
          return 0;
        },
        quiet);
  }
  if (bench_cmd->parsed()) {
    return guarded(
        [&] {
          const auto cfg =
              load_with_flags(bench_config, out_dir, seed, has_seed);
          std::cout << submax::bench_only(cfg).dump(2) << std::endl;
          return 0;
        },
        quiet);
  }
  if (demo_cmd->parsed()) {
    return guarded(
        [&] {
          const auto report = submax::impossibility_demo();
          std::cout << report.summary << "\n\n";
          const auto& s = report.samples.front();
          std::cout << "example at x = (" << s.x1 << ", " << s.x2
                    << "): family A plays {1} w.p. " << s.p1_family_a
                    << ", {2} w.p. " << s.p2_family_a
                    << "; family B plays {1} w.p. " << s.p1_family_b
                    << ", {2} w.p. " << s.p2_family_b << "\n";
          std::cout << "max unbiasedness residual: "
                    << std::max(report.max_residual_a, report.max_residual_b)
                    << ", min solution gap at interior points: "
                    << report.min_solution_gap << std::endl;
          return 0;
        },
        quiet);
  }
  if (list_cmd->parsed()) {
    return guarded(
        [&] {
          std::cout << submax::list_families().dump(2) << std::endl;
          return 0;
        },
        quiet);
  }
  return 0;
}
