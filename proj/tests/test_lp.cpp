#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "minimax/errors.hpp"
#include "minimax/lp.hpp"
#include "minimax/verify/oracles.hpp"
#include "minimax/verify/random_instances.hpp"

using namespace minimax;
using namespace minimax::lp;

namespace {

LinearProgram one_var(double c) {
  LinearProgram lp(1);
  lp.objective = {c};
  return lp;
}

void add(LinearProgram& lp, std::vector<double> row, Relation rel, double b) { lp.add_row(row, rel, b); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("one-variable programs") {
  SUBCASE("x >= 3") {
    auto lp = one_var(1.0);
    add(lp, {1.0}, Relation::kGreaterEqual, 3.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == Status::kOptimal);
    CHECK(s.primal[0] == doctest::Approx(3.0));
    CHECK(s.objective_value == doctest::Approx(3.0));
    CHECK(s.dual[0] == doctest::Approx(1.0));
  }
  SUBCASE("x <= 1, minimize -x") {
    auto lp = one_var(-1.0);
    add(lp, {1.0}, Relation::kLessEqual, 1.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == Status::kOptimal);
    CHECK(s.objective_value == doctest::Approx(-1.0));
    CHECK(s.dual[0] == doctest::Approx(-1.0));
  }
  SUBCASE("x <= -1 with x >= 0 is infeasible") {
    auto lp = one_var(0.0);
    add(lp, {1.0}, Relation::kLessEqual, -1.0);
    CHECK(solve_lp(lp).status == Status::kInfeasible);
  }
  SUBCASE("minimize -x unconstrained is unbounded") {
    CHECK(solve_lp(one_var(-1.0)).status == Status::kUnbounded);
  }
  SUBCASE("upper bound alone") {
    auto lp = one_var(-2.0);
    lp.upper = {4.0};
    const auto s = solve_lp(lp);
    REQUIRE(s.status == Status::kOptimal);
    CHECK(s.objective_value == doctest::Approx(-8.0));
  }
  SUBCASE("free variable") {
    auto lp = one_var(1.0);
    lp.lower = {-kInfinity};
    add(lp, {1.0}, Relation::kGreaterEqual, -5.0);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == Status::kOptimal);
    CHECK(s.primal[0] == doctest::Approx(-5.0));
  }
}

TEST_CASE("a degenerate program that cycles under the largest-coefficient rule") {
  LinearProgram lp(4);
  lp.objective = {-10.0, 57.0, 9.0, 24.0};
  add(lp, {0.5, -5.5, -2.5, 9.0}, Relation::kLessEqual, 0.0);
  add(lp, {0.5, -1.5, -0.5, 1.0}, Relation::kLessEqual, 0.0);
  add(lp, {1.0, 0.0, 0.0, 0.0}, Relation::kLessEqual, 1.0);
  const auto s = solve_lp(lp);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective_value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(check_certificate(lp, s, 1e-9).passed);
}

TEST_CASE("equality rows and redundant constraints") {
  LinearProgram lp(3);
  lp.objective = {1.0, 2.0, 3.0};
  add(lp, {1.0, 1.0, 1.0}, Relation::kEqual, 1.0);
  add(lp, {2.0, 2.0, 2.0}, Relation::kEqual, 2.0);
  add(lp, {1.0, 0.0, 0.0}, Relation::kLessEqual, 0.25);
  const auto s = solve_lp(lp);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective_value == doctest::Approx(0.25 + 1.5));
  CHECK(check_certificate(lp, s, 1e-9).passed);
}

TEST_CASE("certificate report") {
  LinearProgram lp(2);
  lp.objective = {1.0, 1.0};
  add(lp, {1.0, 2.0}, Relation::kGreaterEqual, 2.0);
  add(lp, {3.0, 1.0}, Relation::kGreaterEqual, 3.0);
  auto s = solve_lp(lp);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective_value == doctest::Approx(1.4));
  CHECK(check_certificate(lp, s, 1e-9).passed);
  CHECK(dual_objective(lp, s.dual) == doctest::Approx(1.4));

  SUBCASE("perturbed primal fails and is named") {
    s.primal[0] -= 1e-3;
    const auto report = check_certificate(lp, s, 1e-9);
    CHECK_FALSE(report.passed);
    CHECK(report.primal_residual > 1e-9);
    CHECK_FALSE(report.failures.empty());
    CHECK(check_certificate(lp, s, kInfinity).passed);
  }
  SUBCASE("wrong dual sign fails") {
    s.dual[0] = -s.dual[0] - 0.1;
    CHECK_FALSE(check_certificate(lp, s, 1e-9).passed);
  }
}

TEST_CASE("malformed programs are input errors") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_row(std::vector<double>{1.0}, Relation::kEqual, 1.0), InputError);
  lp.objective[0] = std::nan("");
  CHECK_THROWS_AS(solve_lp(lp), InputError);
  LinearProgram lp2(1);
  lp2.lower = {2.0};
  lp2.upper = {1.0};
  CHECK_THROWS_AS(solve_lp(lp2), InputError);
}

TEST_CASE("random programs: vertex oracle, certificates, determinism") {
  verify::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto lp = verify::random_bounded_lp(rng);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == Status::kOptimal);
    const auto oracle = verify::vertex_enumeration_min(lp);
    REQUIRE(oracle.has_value());
    CHECK(std::abs(s.objective_value - *oracle) <= 1e-8);
    const auto cert = check_certificate(lp, s, 1e-9);
    CHECK(cert.passed);
    CHECK(std::abs(s.objective_value - dual_objective(lp, s.dual)) <= 1e-9);

    const auto again = solve_lp(lp);
    CHECK(same_bits(s.primal, again.primal));
    CHECK(same_bits(s.dual, again.dual));
    CHECK(s.iterations == again.iterations);
  }
}

TEST_CASE("dual signs follow the minimization convention") {
  verify::Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto lp = verify::random_bounded_lp(rng);
    const auto s = solve_lp(lp);
    REQUIRE(s.status == Status::kOptimal);
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
      if (lp.relations[r] == Relation::kLessEqual) CHECK(s.dual[r] <= 1e-9);
      if (lp.relations[r] == Relation::kGreaterEqual) CHECK(s.dual[r] >= -1e-9);
    }
  }
}
