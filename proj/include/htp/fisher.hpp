// Closed-form invariant density of the filter process on (0,1), its
// normalizing constant, and the ergodic-average route to the Fisher
// information matrix.
#pragma once

#include "htp/mat2.hpp"
#include "htp/model.hpp"
#include "htp/rng.hpp"

namespace htp {

// Stationary law of the posterior probability at the true parameters:
//   f(x) = x^(g (mu0-lambda0) - 2) (1-x)^(g (lambda0-mu0) - 2)
//          * exp(-g mu0 / x - g lambda0 / (1-x)) / G,
// with g = 2 / (y1 - y2)^2. Evaluated in log space; the integrable essential
// singularities at 0 and 1 drive the density to zero at both ends.
class InvariantDensity {
 public:
  // max_refinements bounds the tanh-sinh level count; each extra level
  // doubles the node set.
  InvariantDensity(const Theta& theta0, const StateSpace& states, int max_refinements = 15);

  // Normalized density; x must lie in (0, 1).
  double operator()(double x) const;

  double log_unnormalized(double x) const;
  double gamma() const { return gamma_; }
  double log_normalizer() const { return log_normalizer_; }
  double normalizer() const;

  // integral of x f(x) dx over (0, 1); equals mu0 / (lambda0 + mu0).
  double mean() const;

  // integral of f over [a, b] by an independent adaptive Simpson rule (also
  // the route for the normalization self-check).
  double bin_mass(double a, double b) const;

  const Theta& theta0() const { return theta0_; }
  const StateSpace& states() const { return states_; }

 private:
  Theta theta0_;
  StateSpace states_;
  double gamma_;
  double log_peak_;
  double log_normalizer_;
  int max_refinements_;
};

// G(theta0): integral of the unnormalized density, relative tolerance 1e-10;
// throws on quadrature non-convergence.
double normalizing_constant(const Theta& theta0, const StateSpace& states);

// Time-averaged Gram matrix of mdot along a fresh simulation at theta0, with
// the leading burn_in_fraction of the run discarded. The paper gives no
// closed form for the Fisher matrix; this ergodic average is the reference
// route.
SymMat2 fisher_by_ergodic_average(const Theta& theta0, const StateSpace& states,
                                  double sim_horizon, double step, Rng& rng,
                                  double burn_in_fraction = 0.1);

}  // namespace htp
