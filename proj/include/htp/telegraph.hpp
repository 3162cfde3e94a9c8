// Exact simulation of the hidden telegraph signal and of the discretized
// observation process dX = Y dt + dW on a uniform grid.
#pragma once

#include <cstddef>
#include <vector>

#include "htp/model.hpp"
#include "htp/rng.hpp"

namespace htp {

// One realization of the hidden signal: initial state plus the ordered jump
// times in (0, horizon]. The state after k jumps alternates from
// initial_state.
struct EventPath {
  int initial_state = 1;  // 1 -> y1, 2 -> y2
  std::vector<double> jump_times;
  double horizon = 0.0;

  int state_after(std::size_t jumps) const {
    return (jumps % 2 == 0) ? initial_state : 3 - initial_state;
  }
};

// Uniform-grid observation increments. X_t is reconstructed by cumulative
// summation from x0; hidden_integrals (exact per-step drift integrals) are
// kept only when requested, for test oracles.
struct ObservationPath {
  double step = 0.0;
  double horizon = 0.0;
  double x0 = 0.0;
  std::vector<double> increments;
  std::vector<double> hidden_integrals;

  std::size_t n_steps() const { return increments.size(); }

  double terminal_value() const;

  // X_T / T.
  double terminal_average() const { return terminal_value() / horizon; }

  // Sub-path on [0, t]; t must be a grid point.
  ObservationPath prefix(double t) const;
};

// Number of steps of size `step` covering `horizon`; throws unless the grid
// divides the horizon (to 1e-9 relative).
std::size_t grid_steps(double horizon, double step);

// Stationary draw of the initial state, exponential holding times (rate
// lambda in state y1, mu in state y2), jumps truncated at the horizon.
EventPath simulate_telegraph(const Theta& theta, double horizon, Rng& rng);
EventPath simulate_telegraph(const ModelSpec& model, double horizon, Rng& rng);

// Exact per-step integrals of the piecewise-constant signal over each grid
// cell [kh, (k+1)h).
std::vector<double> integrate_hidden(const EventPath& path, const StateSpace& states,
                                     double step);

// dX_k = (exact drift integral over step k) + sqrt(h) * xi_k, xi iid N(0,1).
ObservationPath simulate_observations(const EventPath& path, const StateSpace& states,
                                      double step, Rng& rng, bool store_hidden = false);

}  // namespace htp
