// Reproducible Monte Carlo harness: deterministic per-replication seeding,
// optional parallel execution with index-ordered aggregation, and the
// grid-search likelihood oracle used to benchmark the scoring estimators.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "htp/mat2.hpp"
#include "htp/mle.hpp"
#include "htp/model.hpp"

namespace htp {

struct ExperimentConfig {
  ModelValues model;
  std::vector<double> horizons = {250.0, 1000.0, 4000.0};
  double step = 0.01;
  int replications = 400;
  std::uint64_t base_seed = 20260809;
  std::vector<EstimatorMethod> methods = {EstimatorMethod::moments, EstimatorMethod::one_step};
  EstimationConfig one_step{0.6, {0.25, 0.5, 0.75, 1.0}};
  EstimationConfig two_step{0.4, {0.25, 0.5, 0.75, 1.0}};
  int threads = 0;  // 0 = hardware concurrency

  bool operator==(const ExperimentConfig&) const = default;
};

// Outcome of one method on one horizon of one replication. Failures are
// captured, not thrown, so a bad draw cannot abort a batch.
struct MethodResult {
  EstimatorMethod method = EstimatorMethod::moments;
  double horizon = 0.0;
  bool ok = false;
  std::string error;

  double lambda_hat = 0.0;
  double mu_hat = 0.0;

  // Moment statistics (for process methods: the preliminary estimator's).
  bool solvable = false;
  double beta = 0.0;
  double zeta = 0.0;
  double eta = 0.0;
  double eta_clamped = 0.0;

  // Process methods only: empirical Fisher at the final output time.
  bool has_fisher = false;
  SymMat2 fisher;

  // sqrt(T) I_hat^{1/2} (est - theta0) for process methods,
  // sqrt(T) (est - theta0) for the moment estimator.
  Vec2 standardized;

  bool has_coverage = false;
  bool covered = false;  // 95% ellipse from the empirical Fisher
};

struct ReplicationRecord {
  int index = 0;
  std::uint64_t seed = 0;
  std::vector<MethodResult> results;
  double elapsed_ms = 0.0;
};

struct MethodHorizonSummary {
  EstimatorMethod method = EstimatorMethod::moments;
  double horizon = 0.0;
  int n_total = 0;
  int n_ok = 0;
  Vec2 bias;
  Vec2 mse;
  double t_mse_sum = 0.0;          // T (MSE_lambda + MSE_mu)
  SymMat2 sqrt_t_err_cov;          // sample covariance of sqrt(T) errors
  double frac_unsolvable = 0.0;
  std::optional<double> coverage;  // process methods only
  Vec2 standardized_mean;
  Vec2 standardized_var;
};

struct MCReport {
  ExperimentConfig config;
  std::vector<ReplicationRecord> records;
  std::vector<MethodHorizonSummary> summaries;
};

// Throws std::invalid_argument naming the offending field.
void validate_experiment_config(const ExperimentConfig& config);

// Deterministic given (config, index): the replication seed is
// derive_seed(base_seed, index).
ReplicationRecord run_replication(const ExperimentConfig& config, int index);

// Runs every replication (in parallel when configured), aggregates in index
// order; throws if every replication failed outright.
MCReport run_monte_carlo(const ExperimentConfig& config);

// Brute-force likelihood maximization over a grid_n x grid_n lattice on
// [c0+eps, c1-eps]^2 with eps = (c1-c0)/(grid_n+1); ties break toward the
// smallest (lambda, mu). Test oracle, not a product estimator.
Theta grid_mle_oracle(const ObservationPath& path, const StateSpace& states,
                      const ParameterDomain& domain, int grid_n);

// Runs fn(0..n-1) on `threads` workers (serial when threads <= 1); rethrows
// the first captured exception after all workers join.
void parallel_for_indexed(int n, int threads, const std::function<void(int)>& fn);

}  // namespace htp
