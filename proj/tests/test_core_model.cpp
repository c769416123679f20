#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "minimax/builtins.hpp"
#include "minimax/core_model.hpp"
#include "minimax/errors.hpp"
#include "minimax/verify/oracles.hpp"
#include "minimax/verify/random_instances.hpp"

using namespace minimax;
using minimax::verify::Rng;

namespace {

RandomizedProcedure point_action(std::size_t num_actions, std::size_t action) {
  return RandomizedProcedure::constant(1, num_actions, action);
}

FiniteDecisionProblem zero_loss_problem() {
  return FiniteDecisionProblem({"t1", "t2", "t3"}, {"a1", "a2"}, {"x1", "x2"}, Matrix(3, 2, 0.0),
                               Matrix::from_rows({{0.5, 0.5}, {1.0, 0.0}, {0.2, 0.8}}));
}

bool mentions(const ValidationReport& report, const std::string& text) {
  for (const auto& v : report.violations) {
    if (v.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rational parsing and ordering") {
  CHECK(Rational::parse("1/3") == Rational(1, 3));
  CHECK(Rational::parse("-0.125") == Rational(-1, 8));
  CHECK(Rational::parse("4/8") == Rational(1, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK_FALSE(Rational::parse("abc").has_value());
  CHECK_FALSE(Rational::parse("1/0").has_value());
  CHECK(Rational(1, 4) < Rational(1, 3));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK((Rational(1, 2) - Rational(1, 3)) == Rational(1, 6));
  CHECK(Rational(3, 9).to_string() == "1/3");
  CHECK(Rational(5).to_string() == "5");
}

TEST_CASE("labels compare by value") {
  CHECK(Label(Rational(1, 2)) == Label(Rational(2, 4)));
  CHECK_FALSE(Label("a") == Label("b"));
  CHECK(Label(0.25).to_double() == 0.25);
  CHECK_THROWS_AS(Label("x").to_double(), InputError);
}

TEST_CASE("risk table lookups on the pick-smaller game") {
  const auto game = pick_smaller_game(3);
  // actions are ordered 1, 1/2, 1/3
  CHECK(risk(game, 1, point_action(3, 0)) == 1.0);
  CHECK(risk(game, 0, point_action(3, 2)) == -1.0);
  CHECK(worst_case_risk(game, point_action(3, 2)) == 0.0);
  CHECK(worst_case_risk(game, point_action(3, 0)) == 1.0);
  CHECK(bayes_risk(game, FinitePrior::uniform(3), point_action(3, 2)) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("zero loss gives zero risk") {
  const auto problem = zero_loss_problem();
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto delta = verify::random_procedure(rng, 2, 2);
    CHECK(worst_case_risk(problem, delta) == 0.0);
    CHECK(bayes_risk(problem, verify::random_prior(rng, 3), delta) == 0.0);
  }
}

TEST_CASE("matching pennies has zero Bayes risk under the uniform prior") {
  const auto game = matching_pennies_problem();
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto delta = verify::random_procedure(rng, 1, 2);
    CHECK(std::abs(bayes_risk(game, FinitePrior::uniform(2), delta)) <= 1e-15);
  }
}

TEST_CASE("risk agrees with the definitional long double oracle") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = verify::random_problem(rng);
    const auto delta = verify::random_procedure(rng, p.num_obs(), p.num_actions());
    for (std::size_t t = 0; t < p.num_theta(); ++t) {
      const long double oracle = verify::definitional_risk(p, t, delta);
      CHECK(std::abs(static_cast<long double>(risk(p, t, delta)) - oracle) <= 1e-14L);
    }
  }
}

TEST_CASE("degenerate prior reproduces risk exactly") {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto p = verify::random_problem(rng);
    const auto delta = verify::random_procedure(rng, p.num_obs(), p.num_actions());
    for (std::size_t t = 0; t < p.num_theta(); ++t) {
      CHECK(bayes_risk(p, FinitePrior::point_mass(p.num_theta(), t), delta) == risk(p, t, delta));
    }
  }
}

TEST_CASE("Bayes risk never exceeds worst-case risk") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto p = verify::random_problem(rng);
    const auto delta = verify::random_procedure(rng, p.num_obs(), p.num_actions());
    const auto prior = verify::random_prior(rng, p.num_theta());
    CHECK(bayes_risk(p, prior, delta) <= worst_case_risk(p, delta) + 1e-12);
  }
}

TEST_CASE("risk is linear in procedure mixtures") {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto p = verify::random_problem(rng);
    std::vector<RandomizedProcedure> deltas;
    for (int j = 0; j < 3; ++j) deltas.push_back(verify::random_procedure(rng, p.num_obs(), p.num_actions()));
    const auto w = verify::random_simplex_point(rng, 3);
    const auto mixed = mix_procedures(deltas, w);
    for (std::size_t t = 0; t < p.num_theta(); ++t) {
      double expected = 0.0;
      for (int j = 0; j < 3; ++j) expected += w[j] * risk(p, t, deltas[j]);
      CHECK(std::abs(risk(p, t, mixed) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("mixture identities") {
  Rng rng(7);
  const auto delta = verify::random_procedure(rng, 3, 4);
  const std::vector<RandomizedProcedure> one{delta};
  const std::vector<double> w1{1.0};
  CHECK(mix_procedures(one, w1).matrix() == delta.matrix());

  const std::vector<RandomizedProcedure> two{point_action(2, 0), point_action(2, 1)};
  const std::vector<double> half{0.5, 0.5};
  const auto mixed = mix_procedures(two, half);
  CHECK(mixed.matrix()(0, 0) == 0.5);
  CHECK(mixed.matrix()(0, 1) == 0.5);

  CHECK_THROWS_AS(mix_procedures(std::vector<RandomizedProcedure>{}, std::vector<double>{}), InputError);
  CHECK_THROWS_AS(mix_procedures(two, w1), InputError);
  const std::vector<double> bad{0.7, 0.7};
  CHECK_THROWS_AS(mix_procedures(two, bad), InputError);
}

TEST_CASE("permuting parameters permutes the risk profile") {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto p = verify::random_problem(rng);
    std::vector<std::size_t> order(p.num_theta());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto q = permute_theta(p, order);
    const auto delta = verify::random_procedure(rng, p.num_obs(), p.num_actions());
    const auto rp = risk_profile(p, delta).values;
    const auto rq = risk_profile(q, delta).values;
    for (std::size_t t = 0; t < order.size(); ++t) CHECK(rq[t] == rp[order[t]]);
    CHECK(worst_case_risk(q, delta) == worst_case_risk(p, delta));
  }
}

TEST_CASE("validation names the defect") {
  SUBCASE("valid problem") { CHECK(validate_problem(zero_loss_problem()).ok()); }
  SUBCASE("kernel row off by 0.1") {
    const auto p = FiniteDecisionProblem::unchecked({"t1", "t2"}, {"a"}, {"x1", "x2"}, Matrix(2, 1, 0.0),
                                                    Matrix::from_rows({{0.5, 0.5}, {0.5, 0.4}}));
    const auto report = validate_problem(p);
    REQUIRE(report.violations.size() == 1);
    CHECK(mentions(report, "kernel row 1"));
  }
  SUBCASE("NaN loss") {
    auto loss = Matrix(2, 2, 0.0);
    loss(1, 0) = std::numeric_limits<double>::quiet_NaN();
    const auto p = FiniteDecisionProblem::unchecked({"t1", "t2"}, {"a1", "a2"}, {"x"}, loss, Matrix(2, 1, 1.0));
    const auto report = validate_problem(p);
    REQUIRE(report.violations.size() == 1);
    CHECK(mentions(report, "loss entry (1, 0)"));
  }
  SUBCASE("every violation is listed") {
    const auto p = FiniteDecisionProblem::unchecked({"t", "t"}, {}, {"x"}, Matrix(2, 0, 0.0),
                                                    Matrix::from_rows({{1.0}, {-1.0}}));
    const auto report = validate_problem(p);
    CHECK(report.violations.size() >= 3);
    CHECK_THROWS_AS(FiniteDecisionProblem({"t", "t"}, {}, {"x"}, Matrix(2, 0, 0.0), Matrix::from_rows({{1.0}, {-1.0}})),
                    InputError);
  }
}

TEST_CASE("dimension mismatches are input errors") {
  const auto game = pick_smaller_game(3);
  CHECK_THROWS_AS(risk(game, 0, point_action(2, 0)), InputError);
  CHECK_THROWS_AS(risk(game, 3, point_action(3, 0)), InputError);
  CHECK_THROWS_AS(bayes_risk(game, FinitePrior::uniform(2), point_action(3, 0)), InputError);
  CHECK_THROWS_AS(RandomizedProcedure(Matrix::from_rows({{0.5, 0.4}})), InputError);
  CHECK_THROWS_AS(FinitePrior({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(FinitePrior({1.5, -0.5}), InputError);
  CHECK_THROWS_AS(Matrix::from_rows({{1.0}, {1.0, 2.0}}), InputError);
}

TEST_CASE("row sums are checked at 1e-12") {
  CHECK_NOTHROW(FinitePrior({0.5, 0.5 + 5e-13}));
  CHECK_THROWS_AS(FinitePrior({0.5, 0.5 + 5e-12}), InputError);
}
