// Two-state telegraph model: parameter types, closed-form stationary facts,
// and the validity checks shared by the simulator, filter, and estimators.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace htp {

// Switching rates (lambda out of state y1, mu out of state y2). Both positive.
struct Theta {
  double lambda;
  double mu;

  Theta(double lambda_in, double mu_in);

  double sum() const { return lambda + mu; }
};

// The two signal levels. y1 != y2; span() is the b = y1 - y2 of the
// sensitivity system.
struct StateSpace {
  double y1;
  double y2;

  StateSpace(double y1_in, double y2_in);

  double span() const { return y1 - y2; }
};

// Admissible range (c0, c1) for each rate, 0 < c0 < c1.
struct ParameterDomain {
  double c0;
  double c1;

  ParameterDomain(double c0_in, double c1_in);

  bool contains(double rate) const { return rate > c0 && rate < c1; }
};

struct StationaryMoments {
  double y_bar;  // E Y(t)
  double d_var;  // Var Y(t)
};

struct ModelSpec {
  Theta theta;
  StateSpace states;
  ParameterDomain domain;
};

// Markov transition probabilities over a horizon t; row i = state yi.
struct TransitionMatrix {
  double p11, p12, p21, p22;
};

// P(Y = y1), P(Y = y2) under stationarity.
std::pair<double, double> stationary_distribution(const Theta& theta);

TransitionMatrix transition_probabilities(const Theta& theta, double t);

StationaryMoments stationary_moments(const Theta& theta, const StateSpace& states);

// Stationary covariance E[Y(t) Y(t+s)] at lag s >= 0.
double covariance(const Theta& theta, const StateSpace& states, double lag);

// Moment-bound condition M(N): c0 / (y1 - y2)^2 > (2N + 9) / 4, N >= 2.
// Sufficient for the estimator theory, not necessary in practice.
bool check_condition_m(const ParameterDomain& domain, const StateSpace& states, int n);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

// Raw field bundle used by config loading and the validation entry points;
// carries no invariants of its own.
struct ModelValues {
  double lambda = 1.0;
  double mu = 1.0;
  double y1 = 0.0;
  double y2 = 1.0;
  double c0 = 0.1;
  double c1 = 5.0;

  bool operator==(const ModelValues&) const = default;
};

// Checks every type and cross invariant on raw values, collecting all
// violations by name. M(2) failure is reported as a warning only.
ValidationReport validate_model(const ModelValues& values);

// Cross-invariant check for an already-constructed spec (rates inside the
// domain, canonical state order y1 < y2, M(2) warning).
ValidationReport validate_model(const ModelSpec& spec);

// Builds a validated ModelSpec or throws std::invalid_argument listing every
// violated constraint.
ModelSpec make_model(const ModelValues& values);

}  // namespace htp
