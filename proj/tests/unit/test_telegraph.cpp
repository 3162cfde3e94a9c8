#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "htp/rng.hpp"
#include "htp/telegraph.hpp"

#include "../support/oracles.hpp"

using namespace htp;

namespace {
const StateSpace kUnit(0.0, 1.0);
}

TEST_CASE("telegraph simulation is deterministic under a fixed seed") {
  Rng a(7), b(7);
  const Theta theta(1.0, 3.0);
  const EventPath pa = simulate_telegraph(theta, 100.0, a);
  const EventPath pb = simulate_telegraph(theta, 100.0, b);
  CHECK(pa.initial_state == pb.initial_state);
  REQUIRE(pa.jump_times == pb.jump_times);

  const ObservationPath oa = simulate_observations(pa, kUnit, 0.01, a, true);
  const ObservationPath ob = simulate_observations(pb, kUnit, 0.01, b, true);
  CHECK(oa.increments == ob.increments);
  CHECK(oa.hidden_integrals == ob.hidden_integrals);

  CHECK_THROWS_AS(simulate_telegraph(theta, 0.0, a), std::invalid_argument);
}

TEST_CASE("occupation fractions match the stationary law") {
  const double horizon = 1e4;
  int seed = 11;
  for (const Theta theta : {Theta(1.0, 1.0), Theta(1.0, 3.0), Theta(3.0, 1.0)}) {
    Rng rng(seed++);
    const EventPath path = simulate_telegraph(theta, horizon, rng);
    const double expected = theta.mu / theta.sum();
    CHECK(std::abs(testing::occupation_fraction_y1(path) - expected) < 0.02);
  }
}

TEST_CASE("jump intensity of the stationary chain") {
  // jumps per unit time: p1 lambda + p2 mu = 2 lambda mu / (lambda + mu)
  Rng rng(5);
  const Theta theta(1.0, 3.0);
  const double horizon = 1e4;
  const EventPath path = simulate_telegraph(theta, horizon, rng);
  const double rate = static_cast<double>(path.jump_times.size()) / horizon;
  CHECK(rate == doctest::Approx(1.5).epsilon(0.03));
}

TEST_CASE("hidden integrals are exact piecewise-constant integrals") {
  SUBCASE("no jumps") {
    EventPath constant;
    constant.initial_state = 1;
    constant.horizon = 1.0;
    const StateSpace states(0.3, 1.7);
    const auto integrals = integrate_hidden(constant, states, 0.25);
    REQUIRE(integrals.size() == 4);
    for (double v : integrals) CHECK(v == doctest::Approx(0.25 * 0.3).epsilon(1e-15));
  }

  SUBCASE("single jump inside the first cell") {
    EventPath one_jump;
    one_jump.initial_state = 2;
    one_jump.horizon = 0.2;
    one_jump.jump_times = {0.05};  // half of the first 0.1-cell
    const auto integrals = integrate_hidden(one_jump, kUnit, 0.1);
    REQUIRE(integrals.size() == 2);
    CHECK(integrals[0] == doctest::Approx(0.05 * 1.0 + 0.05 * 0.0).epsilon(1e-12));
    CHECK(integrals[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  }

  SUBCASE("random path sums to the exact event-time integral") {
    Rng rng(99);
    const Theta theta(2.0, 0.7);
    const StateSpace states(-0.5, 2.0);
    const EventPath path = simulate_telegraph(theta, 50.0, rng);
    const auto integrals = integrate_hidden(path, states, 0.01);

    // independent total: walk the jump segments directly
    double direct = 0.0;
    double pos = 0.0;
    int state = path.initial_state;
    for (double tj : path.jump_times) {
      direct += (tj - pos) * (state == 1 ? states.y1 : states.y2);
      pos = tj;
      state = 3 - state;
    }
    direct += (path.horizon - pos) * (state == 1 ? states.y1 : states.y2);

    double summed = 0.0;
    for (double v : integrals) summed += v;
    CHECK(summed == doctest::Approx(direct).epsilon(1e-12));

    const double lo = 0.01 * std::min(states.y1, states.y2);
    const double hi = 0.01 * std::max(states.y1, states.y2);
    for (double v : integrals) {
      CHECK(v >= lo - 1e-15);
      CHECK(v <= hi + 1e-15);
    }
  }

  SUBCASE("grid mismatch is rejected") {
    EventPath p;
    p.initial_state = 1;
    p.horizon = 1.0;
    CHECK_THROWS_AS(integrate_hidden(p, kUnit, 0.3), std::invalid_argument);
  }
}

TEST_CASE("pure-noise observations are iid N(0, h)") {
  // Y identically 0: initial state y1 = 0 with no jumps
  EventPath flat;
  flat.initial_state = 1;
  flat.horizon = 1000.0;
  Rng rng(123);
  const double h = 0.01;
  const ObservationPath obs = simulate_observations(flat, kUnit, h, rng);
  CHECK(std::abs(testing::mean(obs.increments)) < 3.0 * std::sqrt(h / 1e5));
  CHECK(testing::variance(obs.increments) == doctest::Approx(h).epsilon(0.05));
}

TEST_CASE("terminal average concentrates at Y-bar") {
  // Lemma-1 style Monte Carlo oracle at T = 4000, 400 replications
  const Theta theta(1.0, 1.0);
  const double horizon = 4000.0;
  std::vector<double> averages;
  for (int rep = 0; rep < 400; ++rep) {
    Rng rng(derive_seed(301, static_cast<std::uint64_t>(rep)));
    const EventPath hidden = simulate_telegraph(theta, horizon, rng);
    const ObservationPath obs = simulate_observations(hidden, kUnit, 0.01, rng);
    averages.push_back(obs.terminal_average());
  }
  CHECK(std::abs(testing::mean(averages) - 0.5) < 0.01);
}

TEST_CASE("T * Var(X_T / T) stays bounded across horizons") {
  const Theta theta(1.0, 1.0);
  const int reps = 200;
  std::vector<double> tvar;
  for (double horizon : {250.0, 1000.0, 4000.0}) {
    std::vector<double> avg;
    for (int rep = 0; rep < reps; ++rep) {
      Rng rng(derive_seed(302 + static_cast<int>(horizon), static_cast<std::uint64_t>(rep)));
      const EventPath hidden = simulate_telegraph(theta, horizon, rng);
      const ObservationPath obs = simulate_observations(hidden, kUnit, 0.01, rng);
      avg.push_back(obs.terminal_average());
    }
    tvar.push_back(horizon * testing::variance(avg));
  }
  const double lo = std::min({tvar[0], tvar[1], tvar[2]});
  const double hi = std::max({tvar[0], tvar[1], tvar[2]});
  CHECK(hi / lo < 3.0);
}

TEST_CASE("step-averaged lag covariance matches the closed form") {
  const Theta theta(1.0, 1.0);
  const double horizon = 1e4;
  const double h = 0.01;
  Rng rng(404);
  const EventPath path = simulate_telegraph(theta, horizon, rng);
  const auto integrals = integrate_hidden(path, kUnit, h);
  std::vector<double> ybar(integrals.size());
  for (std::size_t k = 0; k < integrals.size(); ++k) ybar[k] = integrals[k] / h;

  for (double lag : {0.0, 0.5, 1.0}) {
    const auto shift = static_cast<std::size_t>(std::llround(lag / h));
    const std::size_t n = ybar.size() - shift;

    // batch means for a standard error of the time average
    const int batches = 20;
    std::vector<double> batch_mean(batches, 0.0);
    const std::size_t per = n / batches;
    for (int b = 0; b < batches; ++b) {
      double acc = 0.0;
      for (std::size_t k = b * per; k < (b + 1) * per; ++k) acc += ybar[k] * ybar[k + shift];
      batch_mean[b] = acc / static_cast<double>(per);
    }
    const double estimate = testing::mean(batch_mean);
    const double se = testing::stderr_of_mean(batch_mean);
    const double expected = covariance(theta, kUnit, lag);
    CHECK(std::abs(estimate - expected) < 3.0 * se + 0.01);
  }
}

TEST_CASE("prefix slices the grid") {
  Rng rng(1);
  const EventPath hidden = simulate_telegraph(Theta(1.0, 1.0), 10.0, rng);
  const ObservationPath obs = simulate_observations(hidden, kUnit, 0.01, rng, true);
  const ObservationPath head = obs.prefix(4.0);
  CHECK(head.n_steps() == 400);
  CHECK(head.horizon == 4.0);
  CHECK(head.increments[399] == obs.increments[399]);
  CHECK(head.hidden_integrals.size() == 400);
  CHECK_THROWS_AS(obs.prefix(11.0), std::invalid_argument);
}
