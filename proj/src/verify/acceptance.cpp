#include "minimax/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "minimax/builtins.hpp"
#include "minimax/discretization.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/lp.hpp"
#include "minimax/transport.hpp"
#include "minimax/verify/oracles.hpp"
#include "minimax/verify/random_instances.hpp"

namespace minimax::verify {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Collects the first few failures and summary statistics for a check.
class Tally {
 public:
  void fail(const std::string& what) {
    ++failures_;
    if (messages_.size() < 3) messages_.push_back(what);
  }
  void stat(const std::string& text) { stats_.push_back(text); }
  bool ok() const { return failures_ == 0; }

  std::string detail() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < stats_.size(); ++i) out << (i ? ", " : "") << stats_[i];
    if (failures_ > 0) {
      out << (stats_.empty() ? "" : "; ") << failures_ << " failure(s): ";
      for (std::size_t i = 0; i < messages_.size(); ++i) out << (i ? " | " : "") << messages_[i];
    }
    return out.str();
  }

 private:
  int failures_ = 0;
  std::vector<std::string> messages_;
  std::vector<std::string> stats_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

FiniteDecisionProblem perturb_loss(const FiniteDecisionProblem& p) {
  Matrix loss = p.loss();
  loss(0, 0) += 0.5;
  return FiniteDecisionProblem(p.theta_labels(), p.action_labels(), p.obs_labels(), std::move(loss), p.kernel());
}

// 1. Finite minimax equality on random games.
CheckResult finite_minimax_equality(const AcceptanceOptions& options) {
  CheckResult result;
  Tally tally;
  Rng rng(1001);
  const auto start = Clock::now();
  double worst_gap = 0.0;
  for (int i = 0; i < 300; ++i) {
    const auto problem = random_problem(rng);
    const auto solution = minimax_lp(problem);
    worst_gap = std::max(worst_gap, solution.duality_gap);
    if (!(solution.duality_gap <= 1e-8)) tally.fail("problem " + std::to_string(i) + " gap " + fmt(solution.duality_gap));
    const auto& checked = options.inject_loss_perturbation ? perturb_loss(problem) : problem;
    const auto report = certify_saddle(checked, solution, 1e-8);
    if (!report.passed()) {
      tally.fail("problem " + std::to_string(i) + (options.inject_loss_perturbation ? " (loss perturbation)" : "") +
                 ": " + report.describe());
    }
  }
  const double elapsed = seconds_since(start);
  if (!(elapsed < 10.0)) tally.fail("runtime " + fmt(elapsed) + " s exceeds 10 s");
  tally.stat("max gap " + fmt(worst_gap));
  tally.stat("runtime " + fmt(elapsed) + " s");
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

// 2. Weak duality over random (problem, procedure, prior) triples.
CheckResult weak_duality(const AcceptanceOptions&) {
  CheckResult result;
  Tally tally;
  Rng rng(2002);
  double most_negative = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto problem = random_problem(rng);
    const auto delta = random_procedure(rng, problem.num_obs(), problem.num_actions());
    const auto prior = random_prior(rng, problem.num_theta());
    const double gap = weak_duality_gap(problem, delta, prior);
    most_negative = std::min(most_negative, gap);
    if (!(gap >= -1e-12)) tally.fail("triple " + std::to_string(i) + " gap " + fmt(gap));
  }
  tally.stat("min gap " + fmt(most_negative));
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

// 3. Pick-the-smaller game: truncations have value 0, witnesses separate
// upper value 1 from lower value -1.
CheckResult pick_smaller_reproduction(const AcceptanceOptions&) {
  CheckResult result;
  Tally tally;
  for (std::size_t n = 1; n <= 20; ++n) {
    const double v = minimax_lp(pick_smaller_game(n)).value;
    if (!(std::abs(v) <= 1e-9)) tally.fail("truncation " + std::to_string(n) + " value " + fmt(v));
  }
  Rng rng(3003);
  double min_nature = 1.0, max_stat = -1.0;
  for (double eps : {0.2, 0.05, 0.01}) {
    for (int i = 0; i < 50; ++i) {
      const auto delta = random_reciprocal_mixture(rng, 8, 1000);
      const auto nw = nature_witness(delta, eps);
      min_nature = std::min(min_nature, nw.achieved_value - (1.0 - 2.0 * eps));
      if (!(nw.achieved_value > 1.0 - 2.0 * eps)) {
        tally.fail("nature witness at eps " + fmt(eps) + " achieved " + fmt(nw.achieved_value));
      }
      const auto prior = random_reciprocal_mixture(rng, 8, 1000);
      const auto sw = statistician_witness(prior, eps);
      max_stat = std::max(max_stat, sw.achieved_value - (2.0 * eps - 1.0));
      if (!(sw.achieved_value < 2.0 * eps - 1.0)) {
        tally.fail("statistician witness at eps " + fmt(eps) + " achieved " + fmt(sw.achieved_value));
      }
    }
  }
  tally.stat("min nature margin " + fmt(min_nature));
  tally.stat("min statistician margin " + fmt(-max_stat));
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

// 4. Clamp game: truncations have value 0; priors escaping past the
// procedures' reach give Bayes risk exactly 1.
CheckResult clamp_reproduction(const AcceptanceOptions&) {
  CheckResult result;
  Tally tally;
  for (std::size_t n = 1; n <= 20; ++n) {
    const double v = minimax_lp(clamp_game(n)).value;
    if (!(std::abs(v) <= 1e-9)) tally.fail("truncation " + std::to_string(n) + " value " + fmt(v));
  }
  // Dyadic weights make every partial sum exact, so those Bayes risks must
  // equal 1 bitwise. The decimal uniform mixture is exact only up to the
  // representation error of its weights.
  Rng rng(4004);
  std::vector<PointMixture> procedures;
  std::vector<bool> dyadic;
  procedures.push_back({{Rational(5)}, {1.0}});
  dyadic.push_back(true);
  {
    PointMixture uniform;
    for (int a = 1; a <= 10; ++a) {
      uniform.points.emplace_back(a);
      uniform.weights.push_back(0.1);
    }
    procedures.push_back(uniform);
    dyadic.push_back(false);
  }
  std::uniform_int_distribution<int> support_size(1, 6), reach(1, 30);
  for (int i = 0; i < 20; ++i) {
    std::set<int> points;
    const int k = support_size(rng);
    while (static_cast<int>(points.size()) < k) points.insert(reach(rng));
    PointMixture mix;
    std::vector<int> counts(points.size(), 1);
    for (int extra = 64 - static_cast<int>(points.size()); extra > 0; --extra) {
      ++counts[std::uniform_int_distribution<std::size_t>(0, counts.size() - 1)(rng)];
    }
    std::size_t j = 0;
    for (int p : points) {
      mix.points.emplace_back(p);
      mix.weights.push_back(counts[j++] / 64.0);
    }
    procedures.push_back(mix);
    dyadic.push_back(true);
  }
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 1; k <= 40; ++k) ks.push_back(k);
  const auto report = escaping_prior_report(ks, procedures);
  std::size_t escaped_pairs = 0;
  for (const auto& entry : report) {
    for (std::size_t i = 0; i < procedures.size(); ++i) {
      if (std::find(entry.flagged.begin(), entry.flagged.end(), i) != entry.flagged.end()) continue;
      ++escaped_pairs;
      const double r = entry.bayes_risks[i];
      const bool ok = dyadic[i] ? r == 1.0 : std::abs(r - 1.0) <= kRowSumTolerance;
      if (!ok) {
        tally.fail("K=" + std::to_string(entry.k) + " procedure " + std::to_string(i) + " Bayes risk " +
                   std::to_string(r));
      }
    }
  }
  if (!(std::abs(report.back().infimum - 1.0) <= kRowSumTolerance)) {
    tally.fail("infimum at K=40 is " + fmt(report.back().infimum));
  }
  tally.stat(std::to_string(escaped_pairs) + " escaped (K, procedure) pairs");
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

// 5. Discretization convergence for the location and Bernoulli families.
CheckResult discretization_convergence(const AcceptanceOptions&) {
  CheckResult result;
  Tally tally;
  const auto start = Clock::now();
  const auto location = location_family();
  std::vector<double> schedule;
  for (int n = 1; n <= 7; ++n) schedule.push_back(std::ldexp(1.0, -n));
  for (const auto& r : lf_prior_sequence(location, schedule)) {
    const double v = 0.5;
    if (!(r.discrete_value <= v + 1e-9 && v <= r.discrete_value + r.mesh + 1e-9)) {
      tally.fail("location mesh " + fmt(r.mesh) + " value " + fmt(r.discrete_value));
    }
    if (!(r.interval_lo - 1e-9 <= v && v <= r.interval_hi + 1e-9)) {
      tally.fail("location mesh " + fmt(r.mesh) + " interval misses 0.5");
    }
  }

  const auto bernoulli = bernoulli_family();
  const auto approx = approximate_minimax(bernoulli, 0.01);
  const double err = std::abs(approx.discrete_value - 0.0625);
  if (approx.theta_net.size() != 101) tally.fail("Bernoulli net has " + std::to_string(approx.theta_net.size()) + " points");
  if (!(err <= 5e-3)) tally.fail("Bernoulli value " + fmt(approx.discrete_value));
  if (!(approx.interval_lo <= 0.0625 && 0.0625 <= approx.interval_hi)) tally.fail("Bernoulli interval misses 1/16");

  const std::vector<double> equalizer{0.25, 0.75};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double theta = static_cast<double>(i) / 999.0;
    worst = std::max(worst, std::abs(family_risk(bernoulli, theta, equalizer) - 0.0625));
  }
  if (!(worst <= 1e-12)) tally.fail("equalizer risk deviates by " + fmt(worst));

  const double elapsed = seconds_since(start);
  if (!(elapsed < 60.0)) tally.fail("runtime " + fmt(elapsed) + " s exceeds 60 s");
  tally.stat("Bernoulli |V-1/16| " + fmt(err));
  tally.stat("equalizer deviation " + fmt(worst));
  tally.stat("runtime " + fmt(elapsed) + " s");
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

// 6. Fictitious play brackets the LP value.
CheckResult fictitious_play_bracketing(const AcceptanceOptions&) {
  CheckResult result;
  Tally tally;
  Rng rng(6006);
  double widest = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto problem = random_problem(rng);
    const double value = minimax_lp(problem).value;
    const auto fp = fictitious_play(problem, 20000);
    if (!(fp.lower_bound <= value + 1e-9 && value <= fp.upper_bound + 1e-9)) {
      tally.fail("problem " + std::to_string(i) + " bracket [" + fmt(fp.lower_bound) + ", " + fmt(fp.upper_bound) +
                 "] misses " + fmt(value));
    }
    const double width = fp.upper_bound - fp.lower_bound;
    widest = std::max(widest, width);
    if (!(width < 0.1)) tally.fail("problem " + std::to_string(i) + " width " + fmt(width));
  }
  tally.stat("max width " + fmt(widest));
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

// 7. Wasserstein: transport LP vs the CDF formula, metric axioms, homogeneity.
CheckResult wasserstein(const AcceptanceOptions&) {
  CheckResult result;
  Tally tally;
  Rng rng(7007);
  double worst_oracle = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto mu = random_measure(rng);
    const auto nu = random_measure(rng);
    const double lp_value = wk_discrete(mu, nu, line_distance, 1.0);
    const double cdf_value = w1_1d(mu, nu);
    worst_oracle = std::max(worst_oracle, std::abs(lp_value - cdf_value));
    if (!(std::abs(lp_value - cdf_value) <= 1e-9)) tally.fail("pair " + std::to_string(i) + " differs by " + fmt(lp_value - cdf_value));
    const double sym = wk_discrete(nu, mu, line_distance, 1.0);
    if (!(std::abs(sym - lp_value) <= 1e-8)) tally.fail("pair " + std::to_string(i) + " asymmetric");
    for (double k : {2.0, 3.0, 0.5}) {
      const double scaled = wk_discrete(mu, nu, line_distance, k);
      if (!(std::abs(scaled - k * lp_value) <= 1e-12)) tally.fail("pair " + std::to_string(i) + " not homogeneous at k=" + fmt(k));
    }
  }
  for (int i = 0; i < 100; ++i) {
    const auto a = random_measure(rng), b = random_measure(rng), c = random_measure(rng);
    const double ab = wk_discrete(a, b, line_distance, 1.0);
    const double bc = wk_discrete(b, c, line_distance, 1.0);
    const double ac = wk_discrete(a, c, line_distance, 1.0);
    if (!(ac <= ab + bc + 1e-8)) tally.fail("triple " + std::to_string(i) + " violates the triangle inequality");
  }
  tally.stat("max |LP - CDF| " + fmt(worst_oracle));
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

// 8. Simplex vs vertex enumeration.
CheckResult lp_oracle(const AcceptanceOptions&) {
  CheckResult result;
  Tally tally;
  Rng rng(8008);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto prog = random_bounded_lp(rng);
    const auto sol = lp::solve_lp(prog);
    const auto oracle = vertex_enumeration_min(prog);
    if (!oracle) {
      tally.fail("LP " + std::to_string(i) + ": oracle found no vertex");
      continue;
    }
    if (sol.status != lp::Status::kOptimal) {
      tally.fail("LP " + std::to_string(i) + " reported " + lp::to_string(sol.status));
      continue;
    }
    worst = std::max(worst, std::abs(sol.objective_value - *oracle));
    if (!(std::abs(sol.objective_value - *oracle) <= 1e-8)) {
      tally.fail("LP " + std::to_string(i) + " value " + fmt(sol.objective_value) + " vs oracle " + fmt(*oracle));
    }
    if (!lp::check_certificate(prog, sol, 1e-9).passed) tally.fail("LP " + std::to_string(i) + " certificate fails");
  }
  tally.stat("max |simplex - oracle| " + fmt(worst));
  result.passed = tally.ok();
  result.detail = tally.detail();
  return result;
}

}  // namespace

const std::vector<AcceptanceCheck>& acceptance_checks() {
  static const std::vector<AcceptanceCheck> checks{
      {"minimax-equality", "game", "finite minimax equality on 300 random games", finite_minimax_equality},
      {"weak-duality", "core", "weak duality on 10^4 random triples", weak_duality},
      {"pick-smaller", "examples", "pick-the-smaller truncations and witnesses", pick_smaller_reproduction},
      {"clamp", "examples", "clamp truncations and escaping priors", clamp_reproduction},
      {"discretization", "discretization", "location and Bernoulli discretization convergence",
       discretization_convergence},
      {"fictitious-play", "game", "fictitious play brackets the LP value", fictitious_play_bracketing},
      {"wasserstein", "transport", "transport LP vs CDF oracle and metric axioms", wasserstein},
      {"lp-oracle", "lp", "simplex vs vertex enumeration on 200 random LPs", lp_oracle},
  };
  return checks;
}

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CheckResult> results;
  for (const auto& check : acceptance_checks()) {
    if (!options.filter.empty() && check.group.find(options.filter) == std::string::npos &&
        check.id.find(options.filter) == std::string::npos) {
      continue;
    }
    const auto start = Clock::now();
    CheckResult r;
    try {
      r = check.run(options);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = check.id;
    r.group = check.group;
    r.title = check.title;
    r.seconds = seconds_since(start);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CheckResult& result) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2fs", result.seconds);
  return std::string(result.passed ? "PASS" : "FAIL") + "  " + result.group + "/" + result.id + "  " + result.title +
         "  (" + result.detail + ")  [" + secs + "]";
}

}  // namespace minimax::verify
