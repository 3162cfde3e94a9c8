#include "htp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "htp/filter.hpp"
#include "htp/rng.hpp"
#include "htp/telegraph.hpp"

namespace htp {

namespace {

// 95% quantile of chi-squared with 2 degrees of freedom.
const double kChi2Q95 = -2.0 * std::log(0.05);

MethodResult evaluate_method(EstimatorMethod method, const ObservationPath& path,
                             const ModelSpec& model, const ExperimentConfig& config) {
  MethodResult r;
  r.method = method;
  r.horizon = path.horizon;
  const double sqrt_t = std::sqrt(path.horizon);
  const Vec2 truth{model.theta.lambda, model.theta.mu};

  try {
    if (method == EstimatorMethod::moments) {
      const MomentEstimate est = estimate_moments(path, model.states, model.domain);
      r.lambda_hat = est.lambda_hat;
      r.mu_hat = est.mu_hat;
      r.solvable = est.stats.solvable;
      r.beta = est.stats.beta;
      r.zeta = est.stats.zeta;
      r.eta = est.stats.eta;
      r.eta_clamped = est.stats.eta_clamped;
      r.standardized = sqrt_t * (Vec2{r.lambda_hat, r.mu_hat} - truth);
    } else {
      const EstimationConfig& est_config =
          (method == EstimatorMethod::one_step) ? config.one_step : config.two_step;
      const EstimatorProcess proc =
          (method == EstimatorMethod::one_step)
              ? one_step_process(path, model.states, model.domain, est_config)
              : two_step_process(path, model.states, model.domain, est_config);
      const ProcessRecord& final_rec = proc.records.back();
      r.lambda_hat = final_rec.estimate.x;
      r.mu_hat = final_rec.estimate.y;
      r.solvable = proc.preliminary.stats.solvable;
      r.beta = proc.preliminary.stats.beta;
      r.zeta = proc.preliminary.stats.zeta;
      r.eta = proc.preliminary.stats.eta;
      r.eta_clamped = proc.preliminary.stats.eta_clamped;
      r.has_fisher = true;
      r.fisher = final_rec.fisher;
      r.standardized = sqrt_t * final_rec.fisher.sqrt_pd().apply(final_rec.estimate - truth);
      r.has_coverage = true;
      const double q2 =
          r.standardized.x * r.standardized.x + r.standardized.y * r.standardized.y;
      r.covered = q2 <= kChi2Q95;
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

}  // namespace

void validate_experiment_config(const ExperimentConfig& config) {
  const ValidationReport model_report = validate_model(config.model);
  if (!model_report.ok())
    throw std::invalid_argument("experiment config: " + model_report.errors.front());
  if (config.replications < 2)
    throw std::invalid_argument("experiment config: replications must be >= 2");
  if (config.horizons.empty())
    throw std::invalid_argument("experiment config: horizons is empty");
  double prev = 0.0;
  for (double t : config.horizons) {
    if (!(t > prev))
      throw std::invalid_argument("experiment config: horizons must be strictly increasing");
    if (std::abs(t - std::round(t)) > 1e-9)
      throw std::invalid_argument("experiment config: horizons must be integers");
    prev = t;
  }
  const double inv_h = 1.0 / config.step;
  if (!(config.step > 0.0) || std::abs(inv_h - std::round(inv_h)) > 1e-9 * inv_h)
    throw std::invalid_argument("experiment config: 1/step must be an integer");
  if (config.methods.empty())
    throw std::invalid_argument("experiment config: methods is empty");
}

ReplicationRecord run_replication(const ExperimentConfig& config, int index) {
  if (index < 0 || index >= config.replications)
    throw std::invalid_argument("run_replication: index outside [0, replications)");
  validate_experiment_config(config);
  const ModelSpec model = make_model(config.model);

  const auto start = std::chrono::steady_clock::now();
  ReplicationRecord record;
  record.index = index;
  record.seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(index));

  Rng rng(record.seed);
  const double t_max = config.horizons.back();
  const EventPath hidden = simulate_telegraph(model.theta, t_max, rng);
  const ObservationPath obs = simulate_observations(hidden, model.states, config.step, rng);

  for (double horizon : config.horizons) {
    const ObservationPath sub = (horizon == t_max) ? obs : obs.prefix(horizon);
    for (EstimatorMethod method : config.methods)
      record.results.push_back(evaluate_method(method, sub, model, config));
  }
  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

void parallel_for_indexed(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

MCReport run_monte_carlo(const ExperimentConfig& config) {
  validate_experiment_config(config);

  MCReport report;
  report.config = config;
  report.records.resize(static_cast<std::size_t>(config.replications));
  parallel_for_indexed(config.replications, config.threads, [&](int i) {
    report.records[static_cast<std::size_t>(i)] = run_replication(config, i);
  });

  int fully_failed = 0;
  for (const auto& rec : report.records) {
    const bool any_ok =
        std::any_of(rec.results.begin(), rec.results.end(), [](const MethodResult& r) {
          return r.ok;
        });
    if (!any_ok) ++fully_failed;
  }
  if (fully_failed == config.replications)
    throw std::runtime_error("run_monte_carlo: every replication failed");

  const Vec2 truth{config.model.lambda, config.model.mu};
  for (double horizon : config.horizons) {
    for (EstimatorMethod method : config.methods) {
      MethodHorizonSummary s;
      s.method = method;
      s.horizon = horizon;
      const double sqrt_t = std::sqrt(horizon);

      Vec2 sum_err, sum_sq, sum_std, sum_std_sq;
      double cov11 = 0.0, cov12 = 0.0, cov22 = 0.0;
      int n_cov = 0, covered = 0, unsolvable = 0;
      for (const auto& rec : report.records) {
        for (const auto& r : rec.results) {
          if (r.method != method || r.horizon != horizon) continue;
          ++s.n_total;
          if (!r.ok) continue;
          ++s.n_ok;
          const Vec2 err{r.lambda_hat - truth.x, r.mu_hat - truth.y};
          sum_err += err;
          sum_sq += Vec2{err.x * err.x, err.y * err.y};
          const Vec2 se = sqrt_t * err;
          cov11 += se.x * se.x;
          cov12 += se.x * se.y;
          cov22 += se.y * se.y;
          sum_std += r.standardized;
          sum_std_sq +=
              Vec2{r.standardized.x * r.standardized.x, r.standardized.y * r.standardized.y};
          if (!r.solvable) ++unsolvable;
          if (r.has_coverage) {
            ++n_cov;
            if (r.covered) ++covered;
          }
        }
      }
      if (s.n_ok > 0) {
        const double n = s.n_ok;
        s.bias = (1.0 / n) * sum_err;
        s.mse = (1.0 / n) * sum_sq;
        s.t_mse_sum = horizon * (s.mse.x + s.mse.y);
        const Vec2 se_mean = sqrt_t * s.bias;
        if (s.n_ok > 1) {
          s.sqrt_t_err_cov = {(cov11 - n * se_mean.x * se_mean.x) / (n - 1.0),
                              (cov12 - n * se_mean.x * se_mean.y) / (n - 1.0),
                              (cov22 - n * se_mean.y * se_mean.y) / (n - 1.0)};
        }
        s.frac_unsolvable = unsolvable / n;
        if (n_cov > 0) s.coverage = static_cast<double>(covered) / n_cov;
        s.standardized_mean = (1.0 / n) * sum_std;
        if (s.n_ok > 1) {
          s.standardized_var = {
              (sum_std_sq.x - n * s.standardized_mean.x * s.standardized_mean.x) / (n - 1.0),
              (sum_std_sq.y - n * s.standardized_mean.y * s.standardized_mean.y) / (n - 1.0)};
        }
      }
      report.summaries.push_back(s);
    }
  }
  return report;
}

Theta grid_mle_oracle(const ObservationPath& path, const StateSpace& states,
                      const ParameterDomain& domain, int grid_n) {
  if (grid_n < 5) throw std::invalid_argument("grid_mle_oracle: grid_n must be >= 5");
  const double width = domain.c1 - domain.c0;
  const double eps = width / (grid_n + 1);
  const double lo = domain.c0 + eps;
  const double spacing = (width - 2.0 * eps) / (grid_n - 1);

  double best = -std::numeric_limits<double>::infinity();
  double best_lambda = lo, best_mu = lo;
  for (int i = 0; i < grid_n; ++i) {
    const double lambda = lo + i * spacing;
    for (int j = 0; j < grid_n; ++j) {
      const double mu = lo + j * spacing;
      const double ll =
          log_likelihood(Theta(lambda, mu), states, path, path.horizon);
      if (ll > best) {
        best = ll;
        best_lambda = lambda;
        best_mu = mu;
      }
    }
  }
  return Theta{best_lambda, best_mu};
}

}  // namespace htp
