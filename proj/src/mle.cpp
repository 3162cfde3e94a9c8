#include "htp/mle.hpp"

#include <cmath>
#include <string>

#include "htp/filter.hpp"

namespace htp {

namespace {

struct Capture {
  double tau;
  std::size_t k;
};

struct ProcessFrame {
  double horizon;
  double learning_horizon;
  std::size_t k_learn;
  MomentEstimate preliminary;
  Theta theta_hat{1.0, 1.0};
  std::vector<Capture> captures;
};

void validate_taus(const std::vector<double>& taus) {
  if (taus.empty()) throw std::invalid_argument("EstimationConfig: output_taus is empty");
  double prev = 0.0;
  for (double tau : taus) {
    if (!(tau > prev && tau <= 1.0))
      throw std::invalid_argument(
          "EstimationConfig: output_taus must be strictly increasing in (0, 1]");
    prev = tau;
  }
}

ProcessFrame prepare_frame(const ObservationPath& path, const StateSpace& states,
                           const ParameterDomain& domain, const EstimationConfig& config) {
  validate_taus(config.output_taus);
  const double horizon = path.horizon;
  const double h = path.step;
  const std::size_t n = path.n_steps();

  ProcessFrame frame{};
  frame.horizon = horizon;
  frame.learning_horizon = std::floor(std::pow(horizon, config.delta));
  if (frame.learning_horizon < 1.0 || frame.learning_horizon >= horizon)
    throw std::invalid_argument("estimation: learning horizon floor(T^delta) = " +
                                std::to_string(frame.learning_horizon) +
                                " must lie in [1, T)");
  frame.k_learn = grid_steps(frame.learning_horizon, h);

  frame.preliminary = estimate_moments(path.prefix(frame.learning_horizon), states, domain);
  frame.theta_hat = Theta(frame.preliminary.lambda_hat, frame.preliminary.mu_hat);

  const double tau_delta = std::pow(horizon, config.delta - 1.0);
  for (double tau : config.output_taus) {
    if (tau <= tau_delta) continue;
    const auto k = static_cast<std::size_t>(std::llround(tau * horizon / h));
    if (k <= frame.k_learn || k > n) continue;
    frame.captures.push_back({tau, k});
  }
  if (frame.captures.empty())
    throw std::invalid_argument("estimation: no output time lies after the learning interval");
  return frame;
}

// Sweeps the trajectory once, capturing the accumulated Gram matrix and score
// at each requested grid index.
struct SweepResult {
  std::vector<SymMat2> gram;   // sum of mdot mdot^T h over [k_learn, k)
  std::vector<Vec2> score;     // sum of mdot (dX - m h) over [k_learn, k)
};

SweepResult sweep(const FilterTrajectory& traj, const ObservationPath& path,
                  const StateSpace& states, const ProcessFrame& frame) {
  const double b = states.span();
  const double h = path.step;
  SweepResult out;
  out.gram.reserve(frame.captures.size());
  out.score.reserve(frame.captures.size());

  SymMat2 gram;
  Vec2 score;
  std::size_t next = 0;
  for (std::size_t k = frame.k_learn; next < frame.captures.size(); ++k) {
    while (next < frame.captures.size() && frame.captures[next].k == k) {
      out.gram.push_back(gram);
      out.score.push_back(score);
      ++next;
    }
    if (next == frame.captures.size()) break;
    const double ml = b * traj.dpi_dlambda[k];
    const double mm = b * traj.dpi_dmu[k];
    gram.a11 += ml * ml * h;
    gram.a12 += ml * mm * h;
    gram.a22 += mm * mm * h;
    const double m = states.y2 + b * traj.pi[k];
    const double innovation = path.increments[k] - m * h;
    score.x += b * traj.dpi_dlambda[k] * innovation;
    score.y += b * traj.dpi_dmu[k] * innovation;
  }
  return out;
}

SymMat2 checked_gram_inverse(const SymMat2& gram, double t) {
  const double tr = gram.trace();
  if (!(gram.det() > 1e-12 * tr * tr))
    throw EstimationError(
        "estimation: singular information matrix at t = " + std::to_string(t), t);
  return gram.inverse();
}

EstimatorProcess run_process(const ObservationPath& path, const StateSpace& states,
                             const ParameterDomain& domain, const EstimationConfig& config,
                             EstimatorMethod method) {
  const ProcessFrame frame = prepare_frame(path, states, domain, config);
  const FilterTrajectory traj = run_filter_with_sensitivities(frame.theta_hat, states, path);
  const SweepResult sums = sweep(traj, path, states, frame);

  EstimatorProcess process;
  process.method = method;
  process.horizon = path.horizon;
  process.step = path.step;
  process.delta = config.delta;
  process.learning_horizon = frame.learning_horizon;
  process.preliminary = frame.preliminary;

  const Vec2 theta_hat{frame.theta_hat.lambda, frame.theta_hat.mu};
  const double b = states.span();
  const double h = path.step;

  for (std::size_t i = 0; i < frame.captures.size(); ++i) {
    const double t = static_cast<double>(frame.captures[i].k) * h;
    const SymMat2 gram_inv = checked_gram_inverse(sums.gram[i], t);
    Vec2 estimate = theta_hat + gram_inv.apply(sums.score[i]);

    if (method == EstimatorMethod::two_step) {
      // Residual against the stage-1 estimate: one plain filter pass at
      // theta*_t over [0, t), sensitivities stay at theta_hat.
      const Theta theta_star(estimate.x, estimate.y);
      const ObservationPath head = path.prefix(t);
      const FilterTrajectory star = run_filter(theta_star, states, head);
      Vec2 residual;
      for (std::size_t k = frame.k_learn; k < frame.captures[i].k; ++k) {
        const double m_star = states.y2 + b * star.pi[k];
        const double innovation = path.increments[k] - m_star * h;
        residual.x += b * traj.dpi_dlambda[k] * innovation;
        residual.y += b * traj.dpi_dmu[k] * innovation;
      }
      estimate += gram_inv.apply(residual);
    }

    process.records.push_back(
        {frame.captures[i].tau, t, estimate, (1.0 / t) * sums.gram[i]});
  }
  return process;
}

}  // namespace

const char* method_name(EstimatorMethod m) {
  switch (m) {
    case EstimatorMethod::moments: return "moments";
    case EstimatorMethod::one_step: return "one-step";
    case EstimatorMethod::two_step: return "two-step";
  }
  return "unknown";
}

EstimatorProcess one_step_process(const ObservationPath& path, const StateSpace& states,
                                  const ParameterDomain& domain,
                                  const EstimationConfig& config) {
  if (!(config.delta > 0.5 && config.delta < 1.0))
    throw std::invalid_argument("one_step_process: delta must lie in (1/2, 1)");
  return run_process(path, states, domain, config, EstimatorMethod::one_step);
}

EstimatorProcess two_step_process(const ObservationPath& path, const StateSpace& states,
                                  const ParameterDomain& domain,
                                  const EstimationConfig& config) {
  if (!(config.delta > 0.25 && config.delta <= 0.5))
    throw std::invalid_argument("two_step_process: delta must lie in (1/4, 1/2]");
  return run_process(path, states, domain, config, EstimatorMethod::two_step);
}

std::vector<StandardizedPoint> standardized_process(const EstimatorProcess& process,
                                                    const Theta& theta0,
                                                    const SymMat2& fisher_ref) {
  if (!(fisher_ref.det() > 0.0 && fisher_ref.trace() > 0.0))
    throw std::invalid_argument("standardized_process: fisher_ref must be positive definite");
  const SymMat2 root = fisher_ref.sqrt_pd();
  const double sqrt_t = std::sqrt(process.horizon);
  const Vec2 truth{theta0.lambda, theta0.mu};

  std::vector<StandardizedPoint> out;
  out.reserve(process.records.size());
  for (const auto& rec : process.records)
    out.push_back({rec.tau, (rec.tau * sqrt_t) * root.apply(rec.estimate - truth)});
  return out;
}

}  // namespace htp
