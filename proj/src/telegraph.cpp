#include "htp/telegraph.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace htp {

double ObservationPath::terminal_value() const {
  double x = x0;
  for (double dx : increments) x += dx;
  return x;
}

ObservationPath ObservationPath::prefix(double t) const {
  const std::size_t n = grid_steps(t, step);
  if (n > increments.size())
    throw std::invalid_argument("ObservationPath::prefix: t exceeds the horizon");
  ObservationPath out;
  out.step = step;
  out.horizon = t;
  out.x0 = x0;
  out.increments.assign(increments.begin(), increments.begin() + static_cast<long>(n));
  if (!hidden_integrals.empty())
    out.hidden_integrals.assign(hidden_integrals.begin(),
                                hidden_integrals.begin() + static_cast<long>(n));
  return out;
}

std::size_t grid_steps(double horizon, double step) {
  if (!(step > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("grid: step and horizon must be positive");
  const double ratio = horizon / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("grid: step does not divide the horizon");
  return static_cast<std::size_t>(rounded);
}

EventPath simulate_telegraph(const Theta& theta, double horizon, Rng& rng) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("simulate_telegraph: horizon must be > 0");
  EventPath path;
  path.horizon = horizon;
  const auto [p1, p2] = stationary_distribution(theta);
  (void)p2;
  path.initial_state = rng.bernoulli(p1) ? 1 : 2;

  int state = path.initial_state;
  double t = 0.0;
  for (;;) {
    const double rate = (state == 1) ? theta.lambda : theta.mu;
    t += rng.exponential(rate);
    if (t > horizon) break;
    path.jump_times.push_back(t);
    state = 3 - state;
  }
  return path;
}

EventPath simulate_telegraph(const ModelSpec& model, double horizon, Rng& rng) {
  return simulate_telegraph(model.theta, horizon, rng);
}

std::vector<double> integrate_hidden(const EventPath& path, const StateSpace& states,
                                     double step) {
  const std::size_t n = grid_steps(path.horizon, step);
  std::vector<double> integrals(n, 0.0);

  std::size_t jump = 0;
  int state = path.initial_state;
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = static_cast<double>(k) * step;
    const double t1 = (k + 1 == n) ? path.horizon : static_cast<double>(k + 1) * step;
    double acc = 0.0;
    double pos = t0;
    while (jump < path.jump_times.size() && path.jump_times[jump] <= t1) {
      const double tj = path.jump_times[jump];
      acc += (tj - pos) * ((state == 1) ? states.y1 : states.y2);
      pos = tj;
      state = 3 - state;
      ++jump;
    }
    acc += (t1 - pos) * ((state == 1) ? states.y1 : states.y2);
    integrals[k] = acc;
  }
  return integrals;
}

ObservationPath simulate_observations(const EventPath& path, const StateSpace& states,
                                      double step, Rng& rng, bool store_hidden) {
  std::vector<double> drift = integrate_hidden(path, states, step);
  ObservationPath obs;
  obs.step = step;
  obs.horizon = path.horizon;
  obs.x0 = 0.0;
  obs.increments.resize(drift.size());
  const double noise_scale = std::sqrt(step);
  for (std::size_t k = 0; k < drift.size(); ++k)
    obs.increments[k] = drift[k] + noise_scale * rng.normal();
  if (store_hidden) obs.hidden_integrals = std::move(drift);
  return obs;
}

}  // namespace htp
