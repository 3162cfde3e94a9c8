#include "htp/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace htp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

Theta::Theta(double lambda_in, double mu_in) : lambda(lambda_in), mu(mu_in) {
  require(std::isfinite(lambda) && lambda > 0.0, "Theta: lambda must be > 0");
  require(std::isfinite(mu) && mu > 0.0, "Theta: mu must be > 0");
}

StateSpace::StateSpace(double y1_in, double y2_in) : y1(y1_in), y2(y2_in) {
  require(std::isfinite(y1) && std::isfinite(y2), "StateSpace: values must be finite");
  require(y1 != y2, "StateSpace: degenerate state space (y1 == y2)");
}

ParameterDomain::ParameterDomain(double c0_in, double c1_in) : c0(c0_in), c1(c1_in) {
  require(std::isfinite(c0) && c0 > 0.0, "ParameterDomain: c0 must be > 0");
  require(std::isfinite(c1) && c1 > c0, "ParameterDomain: c1 must be > c0");
}

std::pair<double, double> stationary_distribution(const Theta& theta) {
  const double s = theta.sum();
  return {theta.mu / s, theta.lambda / s};
}

TransitionMatrix transition_probabilities(const Theta& theta, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("transition_probabilities: t must be >= 0");
  const double s = theta.sum();
  const double p1 = theta.mu / s;
  const double p2 = theta.lambda / s;
  const double e = std::exp(-s * t);
  return {p1 + p2 * e, p2 - p2 * e, p1 - p1 * e, p2 + p1 * e};
}

StationaryMoments stationary_moments(const Theta& theta, const StateSpace& states) {
  const double s = theta.sum();
  const double y_bar = (states.y1 * theta.mu + states.y2 * theta.lambda) / s;
  const double d = states.y2 - states.y1;
  const double d_var = d * d * theta.lambda * theta.mu / (s * s);
  return {y_bar, d_var};
}

double covariance(const Theta& theta, const StateSpace& states, double lag) {
  if (!(lag >= 0.0)) throw std::invalid_argument("covariance: lag must be >= 0");
  const StationaryMoments m = stationary_moments(theta, states);
  return m.y_bar * m.y_bar + m.d_var * std::exp(-theta.sum() * lag);
}

bool check_condition_m(const ParameterDomain& domain, const StateSpace& states, int n) {
  if (n < 2) throw std::invalid_argument("check_condition_m: n must be >= 2");
  const double b = states.span();
  return domain.c0 / (b * b) > (2.0 * n + 9.0) / 4.0;
}

ValidationReport validate_model(const ModelValues& v) {
  ValidationReport report;
  auto err = [&](const std::string& m) { report.errors.push_back(m); };

  if (!(std::isfinite(v.lambda) && v.lambda > 0.0)) err("lambda must be > 0, got " + fmt(v.lambda));
  if (!(std::isfinite(v.mu) && v.mu > 0.0)) err("mu must be > 0, got " + fmt(v.mu));
  if (!(std::isfinite(v.c0) && v.c0 > 0.0)) err("c0 must be > 0, got " + fmt(v.c0));
  if (!(std::isfinite(v.c1) && v.c1 > v.c0))
    err("c1 must exceed c0, got c0 = " + fmt(v.c0) + ", c1 = " + fmt(v.c1));
  if (!(std::isfinite(v.y1) && std::isfinite(v.y2)) || v.y1 == v.y2)
    err("degenerate state space: y1 and y2 must differ, got y1 = y2 = " + fmt(v.y1));
  else if (v.y1 > v.y2)
    err("state labels must satisfy y1 < y2, got y1 = " + fmt(v.y1) + ", y2 = " + fmt(v.y2));
  if (!report.ok()) return report;

  return validate_model(ModelSpec{Theta(v.lambda, v.mu), StateSpace(v.y1, v.y2),
                                  ParameterDomain(v.c0, v.c1)});
}

ValidationReport validate_model(const ModelSpec& spec) {
  ValidationReport report;
  const auto& d = spec.domain;
  if (!d.contains(spec.theta.lambda))
    report.errors.push_back("lambda = " + fmt(spec.theta.lambda) + " is outside (c0, c1) = (" +
                            fmt(d.c0) + ", " + fmt(d.c1) + ")");
  if (!d.contains(spec.theta.mu))
    report.errors.push_back("mu = " + fmt(spec.theta.mu) + " is outside (c0, c1) = (" +
                            fmt(d.c0) + ", " + fmt(d.c1) + ")");
  if (spec.states.y1 > spec.states.y2)
    report.errors.push_back("state labels must satisfy y1 < y2");
  if (!check_condition_m(d, spec.states, 2)) {
    const double b = spec.states.span();
    report.warnings.push_back("condition M(2) fails: c0/(y1-y2)^2 = " + fmt(d.c0 / (b * b)) +
                              " <= 13/4; moment bounds of the theory are not guaranteed");
  }
  return report;
}

ModelSpec make_model(const ModelValues& v) {
  ValidationReport report = validate_model(v);
  if (!report.ok()) {
    std::string msg = "invalid model:";
    for (const auto& e : report.errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  return ModelSpec{Theta(v.lambda, v.mu), StateSpace(v.y1, v.y2), ParameterDomain(v.c0, v.c1)};
}

}  // namespace htp
