// Command-line entry point: simulate | filter | estimate | mc | fisher |
// density, JSON config in, CSV/JSON artifacts out.
#include <CLI11.hpp>

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "htp/experiments.hpp"
#include "htp/fisher.hpp"
#include "htp/filter.hpp"
#include "htp/io.hpp"
#include "htp/mle.hpp"
#include "htp/moments.hpp"
#include "htp/rng.hpp"
#include "htp/telegraph.hpp"

namespace fs = std::filesystem;
using namespace htp;

namespace {

struct CliOptions {
  std::string config_file;
  std::string out_dir;
  std::string path_file;
  std::string method = "moments";
  int density_points = 512;
  std::optional<std::uint64_t> seed_override;
  bool verbose = false;
};

std::string default_out_dir() {
  const char* env = std::getenv("HTP_OUT_DIR");
  return env ? env : ".";
}

AppConfig load_effective_config(const CliOptions& opt) {
  AppConfig config = load_config(opt.config_file);
  if (opt.seed_override) {
    config.sim.seed = *opt.seed_override;
    config.mc.base_seed = *opt.seed_override;
  }
  return config;
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

int cmd_simulate(const CliOptions& opt) {
  const AppConfig config = load_effective_config(opt);
  const ModelSpec model = make_model(config.model);
  for (const auto& w : validate_model(config.model).warnings)
    std::cerr << "warning: " << w << "\n";

  Rng rng(config.sim.seed);
  const EventPath hidden = simulate_telegraph(model.theta, config.sim.horizon, rng);
  const ObservationPath obs =
      simulate_observations(hidden, model.states, config.sim.step, rng, config.sim.store_hidden);

  const fs::path dir = ensure_dir(opt.out_dir);
  write_path_csv(dir / "path.csv", obs);
  write_manifest(dir, "simulate", config, config.sim.seed);
  std::cout << "wrote " << (dir / "path.csv").string() << " (" << obs.n_steps()
            << " increments, " << hidden.jump_times.size() << " jumps)\n";
  return 0;
}

int cmd_filter(const CliOptions& opt) {
  const AppConfig config = load_effective_config(opt);
  const ModelSpec model = make_model(config.model);
  const ObservationPath path = read_path_csv(opt.path_file, config.sim.step);

  const FilterTrajectory traj =
      run_filter_with_sensitivities(model.theta, model.states, path);
  const fs::path dir = ensure_dir(opt.out_dir);
  write_filter_csv(dir / "filter.csv", traj);
  write_manifest(dir, "filter", config, config.sim.seed);
  if (opt.verbose)
    std::cout << "clamped steps: " << traj.clamp_count << " of " << path.n_steps() << "\n";
  std::cout << "wrote " << (dir / "filter.csv").string() << "\n";
  return 0;
}

int cmd_estimate(const CliOptions& opt) {
  const AppConfig config = load_effective_config(opt);
  const ModelSpec model = make_model(config.model);
  const ObservationPath path = read_path_csv(opt.path_file, config.sim.step);
  const auto method = parse_method(opt.method);
  if (!method) throw ConfigError("unknown --method '" + opt.method + "'");

  const fs::path dir = ensure_dir(opt.out_dir);
  if (*method == EstimatorMethod::moments) {
    const MomentEstimate est = estimate_moments(path, model.states, model.domain);
    write_moments_csv(dir / "moments.csv", est, path.horizon, path.step);
    std::cout << "lambda_hat = " << est.lambda_hat << ", mu_hat = " << est.mu_hat
              << (est.stats.solvable ? "" : " (moment equation unsolvable, fallback beta)")
              << "\n";
  } else {
    const EstimationConfig& est_config = (*method == EstimatorMethod::one_step)
                                             ? config.estimation.one_step
                                             : config.estimation.two_step;
    const EstimatorProcess proc =
        (*method == EstimatorMethod::one_step)
            ? one_step_process(path, model.states, model.domain, est_config)
            : two_step_process(path, model.states, model.domain, est_config);
    std::vector<StandardizedPoint> standardized;
    try {
      standardized = standardized_process(proc, model.theta, proc.records.back().fisher);
    } catch (const std::exception& e) {
      if (opt.verbose) std::cerr << "standardization skipped: " << e.what() << "\n";
    }
    write_process_csv(dir / "process.csv", proc, standardized);
    const ProcessRecord& last = proc.records.back();
    std::cout << opt.method << " estimate at t = " << last.t
              << ": lambda = " << last.estimate.x << ", mu = " << last.estimate.y << "\n";
  }
  write_manifest(dir, "estimate", config, config.sim.seed);
  return 0;
}

int cmd_mc(const CliOptions& opt) {
  const AppConfig config = load_effective_config(opt);
  for (const auto& w : validate_model(config.model).warnings)
    std::cerr << "warning: " << w << "\n";
  const ExperimentConfig experiment = to_experiment_config(config);
  validate_experiment_config(experiment);

  const MCReport report = run_monte_carlo(experiment);
  const fs::path dir =
      ensure_dir(opt.out_dir) / run_dir_name(config, std::time(nullptr));
  write_mc_artifacts(report, dir);
  write_manifest(dir, "mc", config, experiment.base_seed);

  for (const auto& s : report.summaries) {
    std::cout << method_name(s.method) << " T=" << s.horizon << ": ok " << s.n_ok << "/"
              << s.n_total << ", T*MSE " << s.t_mse_sum << ", unsolvable "
              << s.frac_unsolvable;
    if (s.coverage) std::cout << ", coverage " << *s.coverage;
    std::cout << "\n";
  }
  std::cout << "artifacts in " << dir.string() << "\n";
  return 0;
}

int cmd_fisher(const CliOptions& opt) {
  const AppConfig config = load_effective_config(opt);
  const ModelSpec model = make_model(config.model);
  Rng rng(config.sim.seed);
  const SymMat2 fisher = fisher_by_ergodic_average(model.theta, model.states,
                                                   config.sim.horizon, config.sim.step, rng);
  const fs::path dir = ensure_dir(opt.out_dir);
  write_fisher_json(dir / "fisher.json", fisher);
  write_manifest(dir, "fisher", config, config.sim.seed);
  const auto [lo, hi] = fisher.eigenvalues();
  std::cout << "empirical Fisher eigenvalues: " << lo << ", " << hi << "\n";
  return 0;
}

int cmd_density(const CliOptions& opt) {
  const AppConfig config = load_effective_config(opt);
  const ModelSpec model = make_model(config.model);
  const InvariantDensity density(model.theta, model.states);
  const fs::path dir = ensure_dir(opt.out_dir);
  write_density_csv(dir / "density.csv", density, opt.density_points);
  write_manifest(dir, "density", config, config.sim.seed);
  std::cout << "normalizing constant G = " << density.normalizer() << "\n";
  if (opt.verbose)
    std::cout << "normalization self-check: integral of f = " << density.bin_mass(0.0, 1.0)
              << ", mean = " << density.mean() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hidden telegraph process toolkit: simulation, filtering, and estimation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CliOptions opt;
  opt.out_dir = default_out_dir();

  int (*selected)(const CliOptions&) = nullptr;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_file, "JSON config file")->required();
    sub->add_option("--out", opt.out_dir,
                    "output directory (default: $HTP_OUT_DIR or current directory)");
    sub->add_option("--seed", opt.seed_override, "override the configured seed");
    sub->add_flag("-v,--verbose", opt.verbose, "print extra diagnostics");
  };

  auto* sim = app.add_subcommand("simulate", "simulate a hidden path and its observations");
  add_common(sim);
  sim->callback([&] { selected = cmd_simulate; });

  auto* flt = app.add_subcommand("filter", "run the posterior filter along a stored path");
  add_common(flt);
  flt->add_option("--path", opt.path_file, "path.csv produced by simulate")->required();
  flt->callback([&] { selected = cmd_filter; });

  auto* est = app.add_subcommand("estimate", "estimate the switching rates from a path");
  add_common(est);
  est->add_option("--path", opt.path_file, "path.csv produced by simulate")->required();
  est->add_option("--method", opt.method, "moments | one-step | two-step");
  est->callback([&] { selected = cmd_estimate; });

  auto* mc = app.add_subcommand("mc", "run the Monte Carlo replication study");
  add_common(mc);
  mc->callback([&] { selected = cmd_mc; });

  auto* fish = app.add_subcommand("fisher", "ergodic-average Fisher information matrix");
  add_common(fish);
  fish->callback([&] { selected = cmd_fisher; });

  auto* dens = app.add_subcommand("density", "invariant density table of the filter process");
  add_common(dens);
  dens->add_option("--points", opt.density_points, "number of table points");
  dens->callback([&] { selected = cmd_density; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return selected(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
