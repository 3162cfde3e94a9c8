// Method-of-moments estimation: the Phi function, the unit-increment
// statistics zeta and eta, the root equation for lambda + mu, and the final
// estimator with its solvability fallback.
#pragma once

#include <optional>

#include "htp/model.hpp"
#include "htp/telegraph.hpp"

namespace htp {

// Phi(x) = 1/x - (1 - e^{-x}) / x^2, strictly decreasing from 1/2 to 0 on
// (0, inf). Below the crossover the alternating series
// 1/2 - x/3! + x^2/4! - ... avoids the cancellation of the closed form.
inline constexpr double kPhiSeriesCrossover = 0.5;

double phi(double x);
double phi_closed_form(double x);
double phi_series(double x);

struct MomentStatistics {
  double terminal_average = 0.0;  // X_T / T
  double zeta = 0.0;
  double eta = 0.0;
  double eta_clamped = 0.0;
  std::optional<double> alpha;  // root of the moment equation, when solvable
  double beta = 0.0;            // estimate of lambda + mu
  bool solvable = false;
};

struct MomentEstimate {
  double lambda_hat = 0.0;  // raw value; not projected onto the domain
  double mu_hat = 0.0;
  MomentStatistics stats;
};

// zeta_T = (1/T) sum_{i<T} (X_{i+1} - X_i)^2 - 1, built from unit-interval
// increments; requires an integer horizon and an integer 1/step.
double zeta_statistic(const ObservationPath& path);

// eta_T = (X_T/T - y1)(y2 - X_T/T) and its clamped version
// max(eta_T, c0^2 / (8 c1^2)).
std::pair<double, double> eta_statistic(const ObservationPath& path, const StateSpace& states,
                                        const ParameterDomain& domain);

// Solves Phi(alpha) = (zeta - avg^2) / (2 eta_clamped) on [2 c0, 2 c1] by
// bisection; absent when the target leaves Phi's range over the interval.
std::optional<double> solve_alpha(double zeta, double eta_clamped, double terminal_average,
                                  const ParameterDomain& domain);

MomentEstimate estimate_moments(const ObservationPath& path, const StateSpace& states,
                                const ParameterDomain& domain);

}  // namespace htp
