#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "htp/model.hpp"

using namespace htp;

namespace {
const std::vector<double> kRateGrid = {0.2, 0.7, 1.0, 2.3, 4.8};
}

TEST_CASE("stationary distribution closed form") {
  auto [p1, p2] = stationary_distribution(Theta(1.0, 1.0));
  CHECK(p1 == 0.5);
  CHECK(p2 == 0.5);

  auto [q1, q2] = stationary_distribution(Theta(1.0, 3.0));
  CHECK(q1 == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(q2 == doctest::Approx(0.25).epsilon(1e-15));

  for (double lam : kRateGrid)
    for (double mu : kRateGrid) {
      auto [a, b] = stationary_distribution(Theta(lam, mu));
      CHECK(std::abs(a + b - 1.0) < 1e-15);
    }
}

TEST_CASE("transition probabilities") {
  const Theta theta(1.0, 3.0);
  const TransitionMatrix id = transition_probabilities(theta, 0.0);
  CHECK(id.p11 == 1.0);
  CHECK(id.p12 == 0.0);
  CHECK(id.p21 == 0.0);
  CHECK(id.p22 == 1.0);

  // P11(1) = 3/4 + 1/4 e^{-4}
  const TransitionMatrix p = transition_probabilities(theta, 1.0);
  CHECK(p.p11 == doctest::Approx(0.754578909722183545).epsilon(1e-14));

  const TransitionMatrix tail = transition_probabilities(Theta(1.0, 1.0), 50.0);
  CHECK(tail.p11 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tail.p21 == doctest::Approx(0.5).epsilon(1e-12));

  for (double lam : kRateGrid)
    for (double mu : kRateGrid) {
      const Theta th(lam, mu);
      for (double t : {0.0, 0.1, 1.0, 10.0}) {
        const TransitionMatrix m = transition_probabilities(th, t);
        CHECK(std::abs(m.p11 + m.p12 - 1.0) < 1e-14);
        CHECK(std::abs(m.p21 + m.p22 - 1.0) < 1e-14);
        CHECK(m.p11 >= 0.0);
        CHECK(m.p12 >= 0.0);
      }
      // semigroup: P(s + t) = P(s) P(t)
      const double s = 0.4, t = 1.3;
      const TransitionMatrix ps = transition_probabilities(th, s);
      const TransitionMatrix pt = transition_probabilities(th, t);
      const TransitionMatrix pst = transition_probabilities(th, s + t);
      CHECK(std::abs(ps.p11 * pt.p11 + ps.p12 * pt.p21 - pst.p11) < 1e-12);
      CHECK(std::abs(ps.p21 * pt.p12 + ps.p22 * pt.p22 - pst.p22) < 1e-12);
    }

  CHECK_THROWS_AS(transition_probabilities(theta, -0.1), std::invalid_argument);
}

TEST_CASE("stationary moments and covariance") {
  const StateSpace unit(0.0, 1.0);
  const StationaryMoments sym = stationary_moments(Theta(1.0, 1.0), unit);
  CHECK(sym.y_bar == 0.5);
  CHECK(sym.d_var == 0.25);

  const StationaryMoments skew = stationary_moments(Theta(1.0, 3.0), unit);
  CHECK(skew.y_bar == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(skew.d_var == doctest::Approx(0.1875).epsilon(1e-15));

  // K(0) = E Y^2 = 0.5 for the symmetric 0/1 chain
  CHECK(covariance(Theta(1.0, 1.0), unit, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // K(1) = 1/4 + 1/4 e^{-2}
  CHECK(covariance(Theta(1.0, 1.0), unit, 1.0) ==
        doctest::Approx(0.283833820809153173).epsilon(1e-14));
  // decorrelation limit
  CHECK(covariance(Theta(1.0, 1.0), unit, 1e4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(covariance(Theta(1.0, 1.0), unit, -1.0), std::invalid_argument);

  for (double lam : kRateGrid)
    for (double mu : kRateGrid) {
      const Theta th(lam, mu);
      const StationaryMoments m = stationary_moments(th, unit);
      CHECK(std::abs(covariance(th, unit, 0.0) - m.y_bar * m.y_bar - m.d_var) < 1e-14);

      // relabeling (y1, lambda) <-> (y2, mu) leaves Y-bar and D unchanged
      const StationaryMoments swapped =
          stationary_moments(Theta(mu, lam), StateSpace(1.0, 0.0));
      CHECK(swapped.y_bar == m.y_bar);
      CHECK(swapped.d_var == m.d_var);
    }
}

TEST_CASE("condition M(N)") {
  const StateSpace unit(0.0, 1.0);
  CHECK(check_condition_m(ParameterDomain(4.0, 10.0), unit, 2));
  CHECK_FALSE(check_condition_m(ParameterDomain(1.0, 10.0), unit, 2));
  // exact boundary is rejected (strict inequality)
  CHECK_FALSE(check_condition_m(ParameterDomain(3.25, 10.0), unit, 2));
  CHECK_THROWS_AS(check_condition_m(ParameterDomain(4.0, 10.0), unit, 1),
                  std::invalid_argument);
}

TEST_CASE("model validation") {
  ModelValues v;  // default regime
  const ValidationReport ok = validate_model(v);
  CHECK(ok.ok());
  REQUIRE(ok.warnings.size() == 1);
  CHECK(ok.warnings.front().find("M(2)") != std::string::npos);

  ModelValues out_of_domain = v;
  out_of_domain.lambda = 6.0;
  const ValidationReport bad = validate_model(out_of_domain);
  CHECK_FALSE(bad.ok());
  CHECK(bad.errors.front().find("lambda") != std::string::npos);
  CHECK_THROWS_AS(make_model(out_of_domain), std::invalid_argument);

  ModelValues degenerate = v;
  degenerate.y1 = degenerate.y2 = 1.0;
  const ValidationReport deg = validate_model(degenerate);
  CHECK_FALSE(deg.ok());
  CHECK(deg.errors.front().find("degenerate") != std::string::npos);

  ModelValues swapped = v;
  swapped.y1 = 1.0;
  swapped.y2 = 0.0;
  CHECK_FALSE(validate_model(swapped).ok());

  ModelValues bad_domain = v;
  bad_domain.c0 = 5.0;
  bad_domain.c1 = 0.1;
  CHECK_FALSE(validate_model(bad_domain).ok());

  // no warning once M(2) holds
  ModelValues strong = v;
  strong.c0 = 4.0;
  strong.c1 = 10.0;
  strong.lambda = strong.mu = 5.0;
  CHECK(validate_model(strong).ok());
  CHECK(validate_model(strong).warnings.empty());

  CHECK_THROWS_AS(Theta(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Theta(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(StateSpace(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ParameterDomain(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ParameterDomain(2.0, 1.0), std::invalid_argument);
}
