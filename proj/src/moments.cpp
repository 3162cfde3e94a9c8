#include "htp/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace htp {

namespace {

void require_positive(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("phi: x must be > 0");
}

// Unit-interval block size 1/h; the horizon must be an integer number of unit
// intervals resolved by the grid.
struct UnitGrid {
  std::size_t per_unit;
  std::size_t units;
};

UnitGrid unit_grid(const ObservationPath& path) {
  const double inv_h = 1.0 / path.step;
  const double m = std::round(inv_h);
  if (m < 1.0 || std::abs(inv_h - m) > 1e-9 * inv_h)
    throw std::invalid_argument("moment statistics need an integer 1/step grid");
  const double t = std::round(path.horizon);
  if (t < 1.0 || std::abs(path.horizon - t) > 1e-9 * std::max(1.0, path.horizon))
    throw std::invalid_argument("moment statistics need an integer horizon");
  const auto per_unit = static_cast<std::size_t>(m);
  const auto units = static_cast<std::size_t>(t);
  if (per_unit * units != path.n_steps())
    throw std::invalid_argument("moment statistics: grid does not cover the horizon");
  return {per_unit, units};
}

}  // namespace

double phi_closed_form(double x) {
  require_positive(x);
  return 1.0 / x + std::expm1(-x) / (x * x);
}

double phi_series(double x) {
  require_positive(x);
  // sum_{n>=0} (-x)^n / (n+2)!
  double term = 0.5;
  double sum = term;
  for (int n = 1; n < 60; ++n) {
    term *= -x / (n + 2);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

double phi(double x) {
  require_positive(x);
  return (x <= kPhiSeriesCrossover) ? phi_series(x) : phi_closed_form(x);
}

double zeta_statistic(const ObservationPath& path) {
  const UnitGrid grid = unit_grid(path);
  double acc = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.units; ++i) {
    double unit_increment = 0.0;
    for (std::size_t j = 0; j < grid.per_unit; ++j) unit_increment += path.increments[k++];
    acc += unit_increment * unit_increment;
  }
  return acc / static_cast<double>(grid.units) - 1.0;
}

std::pair<double, double> eta_statistic(const ObservationPath& path, const StateSpace& states,
                                        const ParameterDomain& domain) {
  const double avg = path.terminal_average();
  const double eta = (avg - states.y1) * (states.y2 - avg);
  const double floor = domain.c0 * domain.c0 / (8.0 * domain.c1 * domain.c1);
  return {eta, std::max(eta, floor)};
}

std::optional<double> solve_alpha(double zeta, double eta_clamped, double terminal_average,
                                  const ParameterDomain& domain) {
  if (!(eta_clamped > 0.0))
    throw std::invalid_argument("solve_alpha: eta_clamped must be > 0");
  const double target = (zeta - terminal_average * terminal_average) / (2.0 * eta_clamped);
  double lo = 2.0 * domain.c0;
  double hi = 2.0 * domain.c1;
  const double phi_lo = phi(lo);  // Phi decreasing: the larger value
  const double phi_hi = phi(hi);
  if (target > phi_lo || target < phi_hi) return std::nullopt;
  if (target == phi_lo) return lo;
  if (target == phi_hi) return hi;

  // Monotone bisection; interval width 1e-12 stays well inside the 1e-10
  // tolerance contract.
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

MomentEstimate estimate_moments(const ObservationPath& path, const StateSpace& states,
                                const ParameterDomain& domain) {
  MomentEstimate est;
  MomentStatistics& s = est.stats;
  s.terminal_average = path.terminal_average();
  s.zeta = zeta_statistic(path);
  std::tie(s.eta, s.eta_clamped) = eta_statistic(path, states, domain);
  s.alpha = solve_alpha(s.zeta, s.eta_clamped, s.terminal_average, domain);
  s.solvable = s.alpha.has_value();
  s.beta = s.solvable ? *s.alpha : domain.c0 + domain.c1;

  const double span = states.y2 - states.y1;
  est.lambda_hat = s.beta * (s.terminal_average - states.y1) / span;
  est.mu_hat = s.beta * (states.y2 - s.terminal_average) / span;
  return est;
}

}  // namespace htp
