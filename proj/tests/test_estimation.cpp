#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rax/estimation.hpp"
#include "rax/rng.hpp"
#include "test_support.hpp"

using namespace rax;

TEST_CASE("estimate_initial_distribution") {
  const std::vector<int> all_zero(7, 0);
  CHECK(estimate_initial_distribution(all_zero, 3) == std::vector<double>{1.0, 0.0, 0.0});

  const std::vector<int> mixed{0, 0, 0, 1, 1};
  const auto rho = estimate_initial_distribution(mixed, 2);
  CHECK(rho[0] == doctest::Approx(0.6));
  CHECK(rho[1] == doctest::Approx(0.4));

  RngStream rng(77);
  const std::vector<double> truth{0.3, 0.7};
  std::vector<int> draws(100'000);
  for (int& s : draws) s = sample_categorical(truth, rng.uniform());
  const auto est = estimate_initial_distribution(draws, 2);
  CHECK(std::abs(est[0] - 0.3) < 0.01);
  CHECK(std::abs(est[1] - 0.7) < 0.01);

  CHECK_THROWS_AS(estimate_initial_distribution(std::vector<int>{}, 2), std::invalid_argument);
  CHECK_THROWS_AS(estimate_initial_distribution(std::vector<int>{2}, 2), std::invalid_argument);
}

TEST_CASE("build_thresholded_kernel") {
  const std::vector<Transition> five{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 1}, {0, 0, 1}};
  const auto k2 = build_thresholded_kernel(five, 2, 2, 2.0);
  CHECK(k2.row(0, 0)[0] == doctest::Approx(0.6));
  CHECK(k2.row(0, 0)[1] == doctest::Approx(0.4));
  CHECK(k2.count(0, 0) == 5);
  // Unvisited cells stay zero.
  for (double p : k2.row(1, 1)) CHECK(p == 0.0);
  CHECK(k2.count(1, 1) == 0);

  // Count must strictly exceed the threshold.
  const auto k5 = build_thresholded_kernel(five, 2, 2, 5.0);
  for (double p : k5.row(0, 0)) CHECK(p == 0.0);
  CHECK(k5.count(0, 0) == 5);

  CHECK_THROWS_AS(build_thresholded_kernel(std::vector<Transition>{{0, 2, 0}}, 2, 2, 1.0), std::invalid_argument);
}

TEST_CASE("thresholds") {
  CHECK(practical_threshold(4, 5, 3, 0.1) == doctest::Approx(2.0 * std::log(600.0)));
  CHECK(practical_threshold(1, 1, 1, 0.9) == 1.0);
  CHECK(theoretical_threshold(2, 2, 2, 0.1, 0.5) == doctest::Approx(0.5 * 512.0 * std::log(80.0)));
  double prev = 0.0;
  for (int s = 1; s <= 6; ++s) {
    const double t = theoretical_threshold(4, s, 3, 0.1);
    CHECK(t > prev);
    CHECK(t >= practical_threshold(4, s, 3, 0.1));
    prev = t;
  }
  CHECK(practical_threshold(4, 5, 3, 0.01) > practical_threshold(4, 5, 3, 0.1));
}

TEST_CASE("OccupancyModel validation") {
  OccupancyModel model(2, 1, 3, {1.0, 0.0}, 2.0);
  ThresholdedKernel bad;
  bad.num_states = 2;
  bad.num_actions = 1;
  bad.threshold = 2.0;
  bad.probs = {0.7, 0.5, 0.0, 0.0};
  bad.counts = {10, 0};
  CHECK_THROWS_AS(static_cast<void>(model.extended(bad)), std::invalid_argument);
  bad.probs = {0.5, 0.5, 0.0, 0.0};
  bad.counts = {2, 0};  // nonzero row without enough visits
  CHECK_THROWS_AS(static_cast<void>(model.extended(bad)), std::invalid_argument);
  bad.counts = {3, 0};
  auto ok = model.extended(bad);
  CHECK(ok.known_steps() == 2);
  ok = ok.extended(bad);
  CHECK(ok.complete());
  CHECK_THROWS_AS(static_cast<void>(ok.extended(bad)), std::invalid_argument);
  CHECK_THROWS_AS(OccupancyModel(2, 1, 3, {0.5, 0.4}, 1.0), std::invalid_argument);
}

TEST_CASE("propagate_occupancy with the true kernel matches exact occupancy") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mdp = testing::random_mdp(5, 4, 6, gen);
    const auto pi = testing::random_policy(5, 4, 6, gen);
    const auto est = propagate_occupancy(OccupancyModel::from_mdp(mdp), pi);
    const auto oracle = testing::oracle_occupancy(mdp, pi);
    REQUIRE(est.steps() == 6);
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(est.data()[i] - oracle[i]) < 1e-12);
  }
}

TEST_CASE("propagate_occupancy on sub-stochastic models") {
  std::mt19937_64 gen(6);
  SUBCASE("zero kernels leave only the first step") {
    const auto model = testing::random_model(3, 2, 4, gen, 1.0);
    const auto occ = propagate_occupancy(model, testing::random_policy(3, 2, 4, gen));
    CHECK(occ.mass(0) == doctest::Approx(1.0));
    for (int h = 1; h < 4; ++h)
      for (double x : occ.step(h)) CHECK(x == 0.0);
  }
  SUBCASE("mass never increases") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto model = testing::random_model(4, 3, 5, gen, 0.3);
      const auto occ = propagate_occupancy(model, testing::random_policy(4, 3, 5, gen));
      for (int h = 0; h + 1 < 5; ++h) CHECK(occ.mass(h + 1) <= occ.mass(h) + 1e-15);
    }
  }
  SUBCASE("partial models cover known steps only") {
    const auto model = testing::random_model(3, 2, 5, gen, 0.0, 2);
    const auto occ = propagate_occupancy(model, testing::random_policy(3, 2, 5, gen));
    CHECK(occ.steps() == 3);
    CHECK(occ.mass(2) == doctest::Approx(1.0));
  }
}

TEST_CASE("mixture_occupancy is linear in the weights") {
  std::mt19937_64 gen(9);
  const auto model = testing::random_model(4, 3, 5, gen, 0.2);
  const auto p1 = testing::random_policy(4, 3, 5, gen);
  const auto p2 = testing::random_policy(4, 3, 5, gen);
  const auto d1 = propagate_occupancy(model, p1);
  const auto d2 = propagate_occupancy(model, p2);

  const auto single = mixture_occupancy(model, MixturePolicy::dirac(p1));
  for (std::size_t i = 0; i < d1.data().size(); ++i) CHECK(single.data()[i] == d1.data()[i]);

  const auto dup = mixture_occupancy(model, MixturePolicy({{0.5, p1}, {0.5, p1}}));
  for (std::size_t i = 0; i < d1.data().size(); ++i) CHECK(dup.data()[i] == d1.data()[i]);

  const auto mixed = mixture_occupancy(model, MixturePolicy({{0.25, p1}, {0.75, p2}}));
  for (std::size_t i = 0; i < d1.data().size(); ++i)
    CHECK(std::abs(mixed.data()[i] - (0.25 * d1.data()[i] + 0.75 * d2.data()[i])) <= 1e-14);
}
