#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minimax/builtins.hpp"
#include "minimax/errors.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/verify/random_instances.hpp"

using namespace minimax;
using minimax::verify::Rng;

TEST_CASE("pick-smaller game") {
  const auto g2 = pick_smaller_game(2);
  CHECK(g2.loss() == Matrix::from_rows({{0, -1}, {1, 0}}));
  CHECK(g2.theta_labels() == LabelList{Label(Rational(1)), Label(Rational(1, 2))});
  CHECK(g2.action_labels() == g2.theta_labels());
  CHECK(pick_smaller_game(1).loss() == Matrix::from_rows({{0}}));
  CHECK_THROWS_AS(pick_smaller_game(0), InputError);
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto g = pick_smaller_game(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(g.loss()(i, j) == -g.loss()(j, i));
    CHECK(std::abs(minimax_lp(g).value) <= 1e-9);
  }
  CHECK(pick_smaller_loss(Rational(1, 2), Rational(1)) == 1.0);
  CHECK(pick_smaller_loss(Rational(1), Rational(1, 3)) == -1.0);
  CHECK(pick_smaller_loss(Rational(1, 4), Rational(2, 8)) == 0.0);
}

TEST_CASE("clamp game") {
  CHECK(clamp_game(3).loss() == Matrix::from_rows({{0, -1, -1}, {1, 0, -1}, {1, 1, 0}}));
  CHECK_THROWS_AS(clamp_game(0), InputError);
  for (std::size_t n = 1; n <= 20; ++n) CHECK(std::abs(minimax_lp(clamp_game(n)).value) <= 1e-9);
  const auto g = clamp_game(12);
  for (std::size_t a = 0; a < 12; ++a)
    for (std::size_t t = 0; t < 12; ++t)
      for (std::size_t u = 0; u < 12; ++u) {
        CHECK(std::abs(g.loss()(t, a) - g.loss()(u, a)) <= std::abs(static_cast<double>(t) - static_cast<double>(u)));
      }
  CHECK(clamp_loss(Rational(7, 2), Rational(3)) == 0.5);
}

TEST_CASE("nature witness") {
  SUBCASE("point mass at 1/3") {
    const auto w = nature_witness({{Rational(1, 3)}, {1.0}}, 0.1);
    CHECK(w.point == Rational(1, 4));
    CHECK(w.achieved_value == 1.0);
    CHECK(w.holds);
    CHECK(std::get<Rational>(w.witness) == Rational(1, 4));
  }
  SUBCASE("uniform on 1 and 1/2") {
    const auto w = nature_witness({{Rational(1), Rational(1, 2)}, {0.5, 0.5}}, 0.1);
    CHECK(w.point == Rational(1, 3));
    CHECK(w.achieved_value == 1.0);
  }
  SUBCASE("a light far point is ignored") {
    const auto w = nature_witness({{Rational(1), Rational(1, 1000)}, {0.95, 0.05}}, 0.1);
    CHECK(w.point == Rational(1, 2));
    CHECK(w.achieved_value >= 0.9 - 1e-12);
    CHECK(w.holds);
  }
  SUBCASE("epsilon range") {
    CHECK_THROWS_AS(nature_witness({{Rational(1)}, {1.0}}, 0.0), InputError);
    CHECK_THROWS_AS(nature_witness({{Rational(1)}, {1.0}}, 0.5), InputError);
  }
}

TEST_CASE("statistician witness") {
  SUBCASE("uniform on 1, 1/2, 1/3") {
    const auto w = statistician_witness({{Rational(1), Rational(1, 2), Rational(1, 3)}, {1.0 / 3, 1.0 / 3, 1.0 / 3}},
                                        0.1);
    CHECK(w.point == Rational(1, 4));
    CHECK(w.achieved_value == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(w.holds);
    CHECK(std::holds_alternative<RandomizedProcedure>(w.witness));
  }
  SUBCASE("point mass at 1/2") {
    const auto w = statistician_witness({{Rational(1, 2)}, {1.0}}, 0.2);
    CHECK(w.achieved_value == -1.0);
  }
  SUBCASE("split mass") {
    const double eps = 0.1;
    const auto w = statistician_witness({{Rational(1), Rational(1, 1000000)}, {1 - eps / 2, eps / 2}}, eps);
    CHECK(w.point == Rational(1, 2));
    CHECK(w.achieved_value <= -(1 - eps) + eps);
    CHECK(w.holds);
  }
  SUBCASE("epsilon range") { CHECK_THROWS_AS(statistician_witness({{Rational(1)}, {1.0}}, 0.7), InputError); }
}

TEST_CASE("witnesses hold on random mixtures") {
  Rng rng(51);
  for (double eps : {0.2, 0.05, 0.01}) {
    for (int i = 0; i < 50; ++i) {
      const auto delta = verify::random_reciprocal_mixture(rng, 6, 200);
      const auto n = nature_witness(delta, eps);
      CHECK(n.holds);
      CHECK(n.achieved_value > 1 - 2 * eps);
      const auto prior = verify::random_reciprocal_mixture(rng, 6, 200);
      const auto s = statistician_witness(prior, eps);
      CHECK(s.holds);
      CHECK(s.achieved_value < 2 * eps - 1);
    }
  }
}

TEST_CASE("escaping priors on the clamp problem") {
  const PointMixture at5{{Rational(5)}, {1.0}};
  const auto report = escaping_prior_report({6, 7}, {at5});
  REQUIRE(report.size() == 2);
  CHECK(report[0].k == 6);
  CHECK(report[0].bayes_risks[0] == 1.0);
  CHECK(report[0].flagged == std::vector<std::size_t>{0});
  CHECK(report[1].bayes_risks[0] == 1.0);
  CHECK(report[1].flagged.empty());
  CHECK(report[1].infimum == 1.0);

  PointMixture uniform;
  for (int a = 1; a <= 8; ++a) {
    uniform.points.emplace_back(a);
    uniform.weights.push_back(0.125);
  }
  const auto far = escaping_prior_report({12}, {uniform});
  CHECK(far[0].bayes_risks[0] == 1.0);
  CHECK(far[0].flagged.empty());

  PointMixture ten;
  for (int a = 1; a <= 10; ++a) {
    ten.points.emplace_back(a);
    ten.weights.push_back(0.1);
  }
  CHECK(std::abs(escaping_prior_report({12}, {ten})[0].bayes_risks[0] - 1.0) <= 1e-12);

  const auto near = escaping_prior_report({3}, {at5});
  CHECK(near[0].bayes_risks[0] == -1.0);
  CHECK(near[0].flagged == std::vector<std::size_t>{0});
}

TEST_CASE("builtin lookup") {
  for (const auto& name : problem_names()) CHECK_NOTHROW(problem_by_name(name, 4));
  CHECK_THROWS_AS(problem_by_name("nope", 3), InputError);
  CHECK(problem_by_name("clamp", 3).loss() == clamp_game(3).loss());
  const auto bin = binary_test_problem();
  CHECK(bin.kernel() == Matrix::from_rows({{0.25, 0.75}, {0.75, 0.25}}));
}
