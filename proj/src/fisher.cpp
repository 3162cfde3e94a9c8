#include "htp/fisher.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "htp/filter.hpp"
#include "htp/telegraph.hpp"

namespace htp {

namespace {

// Adaptive Simpson on [a, b]; independent of the tanh-sinh route.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

InvariantDensity::InvariantDensity(const Theta& theta0, const StateSpace& states,
                                   int max_refinements)
    : theta0_(theta0),
      states_(states),
      gamma_(2.0 / (states.span() * states.span())),
      log_peak_(0.0),
      log_normalizer_(0.0),
      max_refinements_(max_refinements) {
  // Offset by the integrand's peak so the scaled integrand is O(1); the raw
  // normalizer under/overflows for narrow state gaps.
  constexpr int kScan = 4096;
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double x = (i + 0.5) / kScan;
    peak = std::max(peak, log_unnormalized(x));
  }
  log_peak_ = peak;

  boost::math::quadrature::tanh_sinh<double> integrator(max_refinements_);
  double error = 0.0;
  double l1 = 0.0;
  const double scaled =
      integrator.integrate([this](double x) { return std::exp(log_unnormalized(x) - log_peak_); },
                           0.0, 1.0, 1e-12, &error, &l1);
  if (!(scaled > 0.0) || !std::isfinite(scaled) || error > 1e-10)
    throw std::runtime_error("InvariantDensity: quadrature did not converge (estimate " +
                             std::to_string(scaled) + ", error " + std::to_string(error) + ")");
  log_normalizer_ = log_peak_ + std::log(scaled);
}

double InvariantDensity::log_unnormalized(double x) const {
  if (!(x > 0.0 && x < 1.0))
    throw std::invalid_argument("InvariantDensity: x must lie in (0, 1)");
  const double g = gamma_;
  const double dl = theta0_.mu - theta0_.lambda;
  return (g * dl - 2.0) * std::log(x) + (-g * dl - 2.0) * std::log1p(-x) -
         g * theta0_.mu / x - g * theta0_.lambda / (1.0 - x);
}

double InvariantDensity::operator()(double x) const {
  return std::exp(log_unnormalized(x) - log_normalizer_);
}

double InvariantDensity::normalizer() const { return std::exp(log_normalizer_); }

double InvariantDensity::mean() const {
  boost::math::quadrature::tanh_sinh<double> integrator(max_refinements_);
  double error = 0.0;
  const double scaled = integrator.integrate(
      [this](double x) { return x * std::exp(log_unnormalized(x) - log_peak_); }, 0.0, 1.0,
      1e-12, &error);
  return scaled * std::exp(log_peak_ - log_normalizer_);
}

double InvariantDensity::bin_mass(double a, double b) const {
  if (!(0.0 <= a && a < b && b <= 1.0))
    throw std::invalid_argument("InvariantDensity::bin_mass: need 0 <= a < b <= 1");
  const auto f = [this](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double lu = log_unnormalized(x) - log_normalizer_;
    return lu < -745.0 ? 0.0 : std::exp(lu);
  };
  return integrate_simpson(f, a, b, 1e-11);
}

double normalizing_constant(const Theta& theta0, const StateSpace& states) {
  return InvariantDensity(theta0, states).normalizer();
}

SymMat2 fisher_by_ergodic_average(const Theta& theta0, const StateSpace& states,
                                  double sim_horizon, double step, Rng& rng,
                                  double burn_in_fraction) {
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
    throw std::invalid_argument("fisher_by_ergodic_average: burn-in fraction in [0, 1)");
  const EventPath hidden = simulate_telegraph(theta0, sim_horizon, rng);
  const ObservationPath obs = simulate_observations(hidden, states, step, rng);
  const FilterTrajectory traj = run_filter_with_sensitivities(theta0, states, obs);

  const std::size_t n = obs.n_steps();
  const auto k0 = static_cast<std::size_t>(burn_in_fraction * static_cast<double>(n));
  const double b = states.span();
  SymMat2 acc;
  for (std::size_t k = k0; k < n; ++k) {
    const double ml = b * traj.dpi_dlambda[k];
    const double mm = b * traj.dpi_dmu[k];
    acc.a11 += ml * ml;
    acc.a12 += ml * mm;
    acc.a22 += mm * mm;
  }
  return (1.0 / static_cast<double>(n - k0)) * acc;
}

}  // namespace htp
