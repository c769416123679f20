#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "minimax/builtins.hpp"
#include "minimax/discretization.hpp"
#include "minimax/errors.hpp"

using namespace minimax;

namespace {

double covering_radius_at(const std::vector<double>& net, double q) {
  double best = std::numeric_limits<double>::infinity();
  for (double p : net) best = std::min(best, std::abs(p - q));
  return best;
}

}  // namespace

TEST_CASE("uniform nets") {
  CHECK(uniform_net({0.0, 1.0}, 0.5) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(uniform_net({0.0, 1.0}, 1.0) == std::vector<double>{0.0, 1.0});
  CHECK(uniform_net({0.0, 1.0}, 5.0) == std::vector<double>{0.0, 1.0});
  CHECK(uniform_net({0.0, 1.0}, 0.25).size() == 5);
  CHECK(uniform_net({0.0, 1.0}, 0.01).size() == 101);
  CHECK(uniform_net({2.0, 2.0}, 0.1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(uniform_net({0.0, 1.0}, 0.0), InputError);
  CHECK_THROWS_AS(uniform_net({0.0, 1.0}, -0.5), InputError);
  CHECK_THROWS_AS(uniform_net({1.0, 0.0}, 0.5), InputError);
  CHECK_THROWS_AS(uniform_net({0.0, std::numeric_limits<double>::infinity()}, 0.5), InputError);
}

TEST_CASE("uniform nets cover the interval") {
  std::mt19937_64 rng(31);
  for (double mesh : {0.01, 0.03, 0.3}) {
    const Interval iv{-0.7, 1.9};
    const auto net = uniform_net(iv, mesh);
    CHECK(net.front() == iv.lo);
    CHECK(net.back() == iv.hi);
    for (std::size_t i = 1; i < net.size(); ++i) CHECK(net[i] - net[i - 1] <= mesh * (1 + 1e-12));
    std::uniform_real_distribution<double> u(iv.lo, iv.hi);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, covering_radius_at(net, u(rng)));
    CHECK(worst <= mesh / 2 * (1 + 1e-12));
  }
}

TEST_CASE("discretized location family") {
  const auto p = discretize(location_family(), 0.5);
  CHECK(p.loss() == Matrix::from_rows({{0, .5, 1}, {.5, 0, .5}, {1, .5, 0}}));
  CHECK(p.num_obs() == 1);
  const auto coarse = discretize(location_family(), 3.0);
  CHECK(coarse.num_theta() == 2);
  CHECK(coarse.num_actions() == 2);
}

TEST_CASE("discretized Bernoulli family") {
  const auto p = discretize(bernoulli_family(), 0.5);
  CHECK(p.kernel() == Matrix::from_rows({{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}}));
  CHECK(p.loss()(0, 2) == 1.0);
  CHECK(p.loss()(1, 0) == 0.25);
}

TEST_CASE("non-finite oracle values are evaluation errors naming the point") {
  auto family = location_family();
  family.loss = [](double t, double a) { return t > 0.6 && a < 0.1 ? std::nan("") : std::abs(t - a); };
  try {
    discretize(family, 0.25);
    FAIL("expected an evaluation error");
  } catch (const EvaluationError& e) {
    const std::string what = e.what();
    CHECK(what.find("theta=0.75") != std::string::npos);
    CHECK(what.find("a=0") != std::string::npos);
  }
}

TEST_CASE("declared Lipschitz constants survive spot tests") {
  CHECK_NOTHROW(check_lipschitz(location_family(), 2000, 1));
  CHECK_NOTHROW(check_lipschitz(bernoulli_family(), 2000, 2));
  CHECK_NOTHROW(check_lipschitz(clamp_family(), 2000, 3));
  auto wrong = bernoulli_family();
  wrong.lipschitz_k = 0.5;
  CHECK_THROWS_AS(check_lipschitz(wrong, 2000, 4), InputError);
}

TEST_CASE("location family approximation") {
  const auto coarse = approximate_minimax(location_family(), 0.5);
  CHECK(coarse.discrete_value == doctest::Approx(0.5).epsilon(1e-12));
  const auto fine = approximate_minimax(location_family(), 0.01);
  CHECK(fine.discrete_value >= 0.49);
  CHECK(fine.discrete_value <= 0.5 + 1e-12);
  CHECK(fine.interval_lo <= 0.5);
  CHECK(fine.interval_hi >= 0.5);
}

TEST_CASE("Bernoulli family approximation") {
  const auto r = approximate_minimax(bernoulli_family(), 0.01);
  CHECK(r.theta_net.size() == 101);
  CHECK(std::abs(r.discrete_value - 0.0625) <= 5e-3);
  const std::vector<double> equalizer{0.25, 0.75};
  for (double t : {0.0, 0.3, 1.0}) {
    CHECK(std::abs(family_risk(bernoulli_family(), t, equalizer) - 0.0625) <= 1e-15);
  }
}

TEST_CASE("intervals contain the known value and have width k * mesh") {
  struct Case {
    MetricFamily family;
    double value;
  };
  const std::vector<Case> cases{{location_family(), 0.5}, {bernoulli_family(), 0.0625}};
  for (const auto& c : cases) {
    for (double mesh : {0.5, 0.25, 0.1, 0.05, 0.02}) {
      const auto r = approximate_minimax(c.family, mesh);
      CHECK(r.interval_lo <= c.value);
      CHECK(c.value <= r.interval_hi);
      CHECK(std::abs((r.interval_hi - r.interval_lo) - c.family.lipschitz_k * mesh) <= 1e-15);
      double sum = 0.0;
      for (double w : r.prior.weights()) sum += w;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      CHECK(r.prior.size() == r.theta_net.size());
    }
  }
}

TEST_CASE("refining the parameter net never lowers the value") {
  for (const auto& family : {location_family(), bernoulli_family(), clamp_family(2.0)}) {
    for (double action_mesh : {0.5, 0.125}) {
      double previous = -std::numeric_limits<double>::infinity();
      for (double mesh : {0.5, 0.25, 0.125, 0.0625}) {
        const auto coarse = uniform_net(family.theta_interval, mesh);
        const auto fine = uniform_net(family.theta_interval, mesh / 2);
        for (double p : coarse) CHECK(std::find(fine.begin(), fine.end(), p) != fine.end());
        const double v = minimax_lp(discretize(family, mesh, action_mesh)).value;
        CHECK(v >= previous - 1e-9);
        previous = v;
      }
    }
  }
}

TEST_CASE("refining both nets can lower the value") {
  // the statistician gains actions too: 1/8 on the 3-point nets, 1/16 on the 5-point nets
  CHECK(approximate_minimax(bernoulli_family(), 0.5).discrete_value == doctest::Approx(0.125));
  CHECK(approximate_minimax(bernoulli_family(), 0.25).discrete_value == doctest::Approx(0.0625));
}

TEST_CASE("prior sequences") {
  std::vector<double> schedule;
  for (int n = 1; n <= 7; ++n) schedule.push_back(std::ldexp(1.0, -n));
  const auto seq = lf_prior_sequence(location_family(), schedule);
  REQUIRE(seq.size() == schedule.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].mesh == schedule[i]);
    CHECK(seq[i].interval_lo <= 0.5);
    CHECK(seq[i].interval_hi >= 0.5);
    CHECK(seq[i].interval_hi - seq[i].interval_lo == schedule[i]);
    CHECK(std::abs(seq[i].discrete_maximin - 0.5) <= 1e-9);
  }

  const auto single = lf_prior_sequence(location_family(), {0.1});
  const auto direct = approximate_minimax(location_family(), 0.1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].discrete_value == direct.discrete_value);
  CHECK(single[0].prior.weights() == direct.prior.weights());

  const auto bern = lf_prior_sequence(bernoulli_family(), {0.1, 0.05, 0.02, 0.01});
  for (const auto& r : bern) {
    CHECK(r.interval_lo <= 0.0625);
    CHECK(r.interval_hi >= 0.0625);
  }
  CHECK(std::abs(bern.back().discrete_value - 0.0625) <= std::abs(bern.front().discrete_value - 0.0625) + 1e-12);

  CHECK_THROWS_AS(lf_prior_sequence(location_family(), {}), InputError);
  CHECK_THROWS_AS(lf_prior_sequence(location_family(), {0.1, 0.2}), InputError);
  CHECK_THROWS_AS(lf_prior_sequence(location_family(), {0.1, 0.1}), InputError);
  CHECK_THROWS_AS(lf_prior_sequence(location_family(), {0.1, -0.1}), InputError);
}

TEST_CASE("excess Bayes risk") {
  const auto family = location_family();
  const double mesh = 0.1;
  const auto r = approximate_minimax(family, mesh);
  CHECK(excess_bayes_risk(family, r.procedure, mesh) <= 1e-8);

  const std::size_t n = r.action_net.size();
  const auto at_zero = RandomizedProcedure::constant(1, n, 0);
  const auto at_half = RandomizedProcedure::constant(1, n, n / 2);
  REQUIRE(r.action_net[n / 2] == doctest::Approx(0.5));
  CHECK(excess_bayes_risk(family, at_zero, mesh) <= family.lipschitz_k * mesh);
  CHECK(excess_bayes_risk(family, at_half, mesh) <= family.lipschitz_k * mesh);

  CHECK_THROWS_AS(excess_bayes_risk(family, RandomizedProcedure::constant(1, n + 1, 0), mesh), InputError);
}

TEST_CASE("family lookup") {
  CHECK(family_by_name("location").family_id == "location");
  CHECK(family_by_name("clamp", {3.0}).theta_interval.hi == 3.0);
  try {
    family_by_name("gaussian");
    FAIL("expected an input error");
  } catch (const InputError& e) {
    const std::string what = e.what();
    for (const auto& name : family_names()) CHECK(what.find(name) != std::string::npos);
  }
  CHECK_THROWS_AS(family_by_name("location", {1.0}), InputError);
  CHECK(location_family().loss(0.3, 0.7) == doctest::Approx(0.4));
  CHECK(bernoulli_family().kernel(0.25, 0) == 0.75);
  CHECK(bernoulli_family().kernel(0.25, 1) == 0.25);
}
