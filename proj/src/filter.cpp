#include "htp/filter.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace htp {

namespace {

std::atomic<std::uint64_t> g_filter_passes{0};

// Grid index of time t; t must sit on the grid.
std::size_t grid_index(double t, double step, std::size_t n) {
  const double ratio = t / step;
  const double rounded = std::round(ratio);
  if (rounded < 0.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("filter: time is not a grid point");
  const auto k = static_cast<std::size_t>(rounded);
  if (k > n) throw std::invalid_argument("filter: time beyond the trajectory");
  return k;
}

double clamp_pi(double p, std::int64_t& clamp_count) {
  if (p < kPiClamp) {
    ++clamp_count;
    return kPiClamp;
  }
  if (p > 1.0 - kPiClamp) {
    ++clamp_count;
    return 1.0 - kPiClamp;
  }
  return p;
}

}  // namespace

double conditional_mean(double pi, const StateSpace& states) {
  if (!(pi >= 0.0 && pi <= 1.0))
    throw std::invalid_argument("conditional_mean: pi must lie in [0, 1]");
  return states.y2 + (states.y1 - states.y2) * pi;
}

FilterTrajectory run_filter(const Theta& theta, const StateSpace& states,
                            const ObservationPath& path, std::optional<double> pi0) {
  g_filter_passes.fetch_add(1, std::memory_order_relaxed);
  const double h = path.step;
  const double b = states.span();
  const double lam = theta.lambda;
  const double mu = theta.mu;
  const std::size_t n = path.n_steps();

  FilterTrajectory traj;
  traj.step = h;
  traj.theta_used = theta;
  traj.pi.resize(n + 1);

  double p = pi0.value_or(mu / (lam + mu));
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("run_filter: pi0 must lie in [0, 1]");
  traj.pi[0] = p;

  for (std::size_t k = 0; k < n; ++k) {
    const double dx = path.increments[k];
    const double q = p * (1.0 - p);
    const double m = states.y2 + b * p;
    // drift of (03): mu - (lam+mu) pi + pi(1-pi)(y2-y1) m, with (y2-y1) = -b
    const double drift = mu - (lam + mu) * p - q * b * m;
    double next = p + drift * h + q * b * dx;
    if (!std::isfinite(next))
      throw FilterError("run_filter: non-finite update at step " + std::to_string(k), k);
    p = clamp_pi(next, traj.clamp_count);
    traj.pi[k + 1] = p;
  }
  return traj;
}

FilterTrajectory run_filter_with_sensitivities(const Theta& theta, const StateSpace& states,
                                               const ObservationPath& path) {
  g_filter_passes.fetch_add(1, std::memory_order_relaxed);
  const double h = path.step;
  const double b = states.span();
  const double b2 = b * b;
  const double lam = theta.lambda;
  const double mu = theta.mu;
  const std::size_t n = path.n_steps();

  FilterTrajectory traj;
  traj.step = h;
  traj.theta_used = theta;
  traj.pi.resize(n + 1);
  traj.dpi_dlambda.resize(n + 1);
  traj.dpi_dmu.resize(n + 1);

  double p = mu / (lam + mu);
  double sl = 0.0;  // d pi / d lambda
  double sm = 0.0;  // d pi / d mu
  traj.pi[0] = p;
  traj.dpi_dlambda[0] = 0.0;
  traj.dpi_dmu[0] = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double dx = path.increments[k];
    const double q = p * (1.0 - p);
    const double m = states.y2 + b * p;
    const double drift = mu - (lam + mu) * p - q * b * m;

    // Sensitivity dynamics share the linear part: d s = (forcing - bracket s) dt
    // + (1-2pi) b s dX, with forcing -pi for lambda and (1-pi) for mu.
    const double bracket = lam + mu + (1.0 - 2.0 * p) * b * m + q * b2;
    const double gain = (1.0 - 2.0 * p) * b;
    const double sl_next = sl + (-p - bracket * sl) * h + gain * sl * dx;
    const double sm_next = sm + ((1.0 - p) - bracket * sm) * h + gain * sm * dx;
    const double p_next = p + drift * h + q * b * dx;

    if (!std::isfinite(p_next) || !std::isfinite(sl_next) || !std::isfinite(sm_next))
      throw FilterError("run_filter_with_sensitivities: non-finite update at step " +
                            std::to_string(k),
                        k);
    p = clamp_pi(p_next, traj.clamp_count);
    sl = sl_next;
    sm = sm_next;
    traj.pi[k + 1] = p;
    traj.dpi_dlambda[k + 1] = sl;
    traj.dpi_dmu[k + 1] = sm;
  }
  return traj;
}

SymMat2 empirical_fisher(const FilterTrajectory& traj, const StateSpace& states, double t0,
                         double t) {
  if (!traj.has_sensitivities())
    throw std::invalid_argument("empirical_fisher: trajectory lacks sensitivities");
  const std::size_t n = traj.size() - 1;
  const std::size_t k0 = grid_index(t0, traj.step, n);
  const std::size_t k1 = grid_index(t, traj.step, n);
  if (k0 >= k1) throw std::invalid_argument("empirical_fisher: empty window");

  const double b = states.span();
  SymMat2 acc;
  for (std::size_t k = k0; k < k1; ++k) {
    const double ml = b * traj.dpi_dlambda[k];
    const double mm = b * traj.dpi_dmu[k];
    acc.a11 += ml * ml;
    acc.a12 += ml * mm;
    acc.a22 += mm * mm;
  }
  return (traj.step / t) * acc;
}

Vec2 score_integral(const FilterTrajectory& traj, const ObservationPath& path,
                    const StateSpace& states, double t0, double t) {
  if (!traj.has_sensitivities())
    throw std::invalid_argument("score_integral: trajectory lacks sensitivities");
  const std::size_t n = traj.size() - 1;
  const std::size_t k0 = grid_index(t0, traj.step, n);
  const std::size_t k1 = grid_index(t, traj.step, n);
  if (k0 >= k1) throw std::invalid_argument("score_integral: empty window");

  const double b = states.span();
  const double h = traj.step;
  Vec2 acc;
  for (std::size_t k = k0; k < k1; ++k) {
    const double m = states.y2 + b * traj.pi[k];
    const double innovation = path.increments[k] - m * h;
    acc.x += b * traj.dpi_dlambda[k] * innovation;
    acc.y += b * traj.dpi_dmu[k] * innovation;
  }
  return acc;
}

double log_likelihood(const Theta& theta, const StateSpace& states,
                      const ObservationPath& path, double t) {
  const std::size_t k1 = grid_index(t, path.step, path.n_steps());
  FilterTrajectory traj = run_filter(theta, states, path);
  const double b = states.span();
  const double h = path.step;
  double acc = 0.0;
  for (std::size_t k = 0; k < k1; ++k) {
    const double m = states.y2 + b * traj.pi[k];
    acc += m * path.increments[k] - 0.5 * m * m * h;
  }
  return acc;
}

std::uint64_t filter_pass_count() { return g_filter_passes.load(std::memory_order_relaxed); }

}  // namespace htp
