// Conditional-probability filter for the hidden telegraph signal and its
// parameter sensitivities, integrated by explicit Euler directly against the
// observed increments, plus the integrals built from a filtered trajectory:
// empirical Fisher matrix, score, and log-likelihood.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "htp/mat2.hpp"
#include "htp/model.hpp"
#include "htp/telegraph.hpp"

namespace htp {

// Posterior probabilities are clamped to [kPiClamp, 1 - kPiClamp] after each
// Euler step; (0,1) is invariant for the exact dynamics but Euler can
// overshoot.
inline constexpr double kPiClamp = 1e-9;

struct FilterError : std::runtime_error {
  std::size_t step;
  FilterError(const std::string& msg, std::size_t step_in)
      : std::runtime_error(msg), step(step_in) {}
};

// pi_k = P(Y(kh) = y1 | observations), with optional parameter sensitivities
// d pi / d lambda and d pi / d mu on the same grid.
struct FilterTrajectory {
  double step = 0.0;
  Theta theta_used{1.0, 1.0};
  std::vector<double> pi;
  std::vector<double> dpi_dlambda;
  std::vector<double> dpi_dmu;
  std::int64_t clamp_count = 0;

  bool has_sensitivities() const { return !dpi_dlambda.empty(); }
  std::size_t size() const { return pi.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * step; }
};

// m = y2 + (y1 - y2) pi; the filter's drift prediction.
double conditional_mean(double pi, const StateSpace& states);

// Integrates the posterior SDE along the path. pi0 defaults to the stationary
// probability mu / (lambda + mu) of the candidate parameters.
FilterTrajectory run_filter(const Theta& theta, const StateSpace& states,
                            const ObservationPath& path,
                            std::optional<double> pi0 = std::nullopt);

// Jointly integrates pi and its two parameter derivatives (sensitivities
// start at zero).
FilterTrajectory run_filter_with_sensitivities(const Theta& theta, const StateSpace& states,
                                               const ObservationPath& path);

// (1/t) * sum over grid points in [t0, t) of mdot mdot^T h, where
// mdot = (y1 - y2) * (dpi_dlambda, dpi_dmu).
SymMat2 empirical_fisher(const FilterTrajectory& traj, const StateSpace& states, double t0,
                         double t);

// sum over grid points in [t0, t) of mdot_k (dX_k - m_k h); left-endpoint
// (Ito) evaluation.
Vec2 score_integral(const FilterTrajectory& traj, const ObservationPath& path,
                    const StateSpace& states, double t0, double t);

// log L(theta, X^t) = sum m_k dX_k - (1/2) sum m_k^2 h over [0, t); runs its
// own pi-filter at theta.
double log_likelihood(const Theta& theta, const StateSpace& states,
                      const ObservationPath& path, double t);

// Instrumentation: number of filter passes (with or without sensitivities)
// executed by this process so far.
std::uint64_t filter_pass_count();

}  // namespace htp
