#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "htp/fisher.hpp"
#include "htp/filter.hpp"
#include "htp/rng.hpp"
#include "htp/telegraph.hpp"

#include "../support/oracles.hpp"

using namespace htp;

namespace {
const StateSpace kUnit(0.0, 1.0);
}

TEST_CASE("invariant density normalization and moments") {
  const InvariantDensity density(Theta(1.0, 1.0), kUnit);
  CHECK(density.gamma() == 2.0);
  CHECK(density.normalizer() > 0.0);
  CHECK(std::isfinite(density.normalizer()));

  // independent Simpson route for the normalization self-check
  CHECK(std::abs(density.bin_mass(0.0, 1.0) - 1.0) < 1e-8);

  CHECK(density.mean() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(InvariantDensity(Theta(1.0, 3.0), kUnit).mean() ==
        doctest::Approx(0.75).epsilon(2e-6));
  CHECK(InvariantDensity(Theta(3.0, 1.0), kUnit).mean() ==
        doctest::Approx(0.25).epsilon(2e-6));

  CHECK_THROWS_AS(density(0.0), std::invalid_argument);
  CHECK_THROWS_AS(density(1.0), std::invalid_argument);
  CHECK_THROWS_AS(density.bin_mass(0.5, 0.2), std::invalid_argument);
}

TEST_CASE("density symmetries") {
  const InvariantDensity symmetric(Theta(1.0, 1.0), kUnit);
  for (double x : {0.1, 0.25, 0.4, 0.47}) {
    CHECK(symmetric(x) == doctest::Approx(symmetric(1.0 - x)).epsilon(1e-12));
  }

  // f_(lambda,mu)(x) = f_(mu,lambda)(1 - x)
  const InvariantDensity skew(Theta(1.0, 3.0), kUnit);
  const InvariantDensity swapped(Theta(3.0, 1.0), kUnit);
  for (double x : {0.15, 0.35, 0.6, 0.85}) {
    CHECK(skew(x) == doctest::Approx(swapped(1.0 - x)).epsilon(1e-12));
  }
}

TEST_CASE("normalizing constant is stable and positive over the domain") {
  // one more refinement level doubles the tanh-sinh node set
  const InvariantDensity coarse(Theta(1.3, 0.8), kUnit, 10);
  const InvariantDensity fine(Theta(1.3, 0.8), kUnit, 15);
  CHECK(coarse.normalizer() == doctest::Approx(fine.normalizer()).epsilon(1e-10));

  for (double lam : {0.2, 1.0, 2.5, 5.0})
    for (double mu : {0.2, 1.0, 2.5, 5.0}) {
      const double g = normalizing_constant(Theta(lam, mu), kUnit);
      CHECK(g > 0.0);
      CHECK(std::isfinite(g));
    }

  // narrow state gap: raw normalizer would overflow/underflow, log form works
  const InvariantDensity narrow(Theta(1.0, 3.0), StateSpace(0.0, 0.1));
  CHECK(std::isfinite(narrow.log_normalizer()));
  CHECK(std::abs(narrow.bin_mass(0.0, 1.0) - 1.0) < 1e-8);
}

TEST_CASE("simulated posterior histogram matches the invariant density") {
  const Theta theta(1.0, 1.0);
  Rng rng(606);
  const EventPath hidden = simulate_telegraph(theta, 1e4, rng);
  const ObservationPath obs = simulate_observations(hidden, kUnit, 0.01, rng);
  const FilterTrajectory traj = run_filter(theta, kUnit, obs);

  const int bins = 50;
  std::vector<double> histogram(bins, 0.0);
  for (double p : traj.pi) {
    int bin = static_cast<int>(p * bins);
    if (bin == bins) bin = bins - 1;
    histogram[bin] += 1.0;
  }
  for (double& mass : histogram) mass /= static_cast<double>(traj.pi.size());

  const InvariantDensity density(theta, kUnit);
  double tv = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double expected =
        density.bin_mass(static_cast<double>(b) / bins, static_cast<double>(b + 1) / bins);
    tv += std::abs(histogram[b] - expected);
  }
  tv *= 0.5;
  CHECK(tv < 0.05);

  // long-run posterior mean agrees with the density mean (tower property)
  CHECK(std::abs(testing::mean(traj.pi) - density.mean()) < 0.01);
}

TEST_CASE("ergodic-average Fisher matrix") {
  const Theta theta(1.0, 1.0);
  Rng rng(707);
  const SymMat2 fisher = fisher_by_ergodic_average(theta, kUnit, 1e4, 0.01, rng);

  const auto [lo, hi] = fisher.eigenvalues();
  CHECK(lo > 0.0);
  CHECK(lo > 1e-3);  // non-degeneracy in the default regime
  CHECK(hi > lo);

  // split-sample agreement
  Rng rng_a(708), rng_b(709);
  const SymMat2 a = fisher_by_ergodic_average(theta, kUnit, 5e3, 0.01, rng_a);
  const SymMat2 b = fisher_by_ergodic_average(theta, kUnit, 5e3, 0.01, rng_b);
  CHECK(testing::rel_diff(a.a11, b.a11) < 0.10);
  CHECK(testing::rel_diff(a.a12, b.a12) < 0.10);
  CHECK(testing::rel_diff(a.a22, b.a22) < 0.10);

  // translation of both states leaves the statistic unchanged up to noise
  Rng rng_c(707);
  const SymMat2 lifted =
      fisher_by_ergodic_average(theta, StateSpace(2.0, 3.0), 1e4, 0.01, rng_c);
  CHECK(testing::rel_diff(fisher.a11, lifted.a11) < 0.10);
  CHECK(testing::rel_diff(fisher.a22, lifted.a22) < 0.10);

  CHECK_THROWS_AS(fisher_by_ergodic_average(theta, kUnit, 1e4, 0.01, rng, 1.5),
                  std::invalid_argument);
}
