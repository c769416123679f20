// Command-line front end: solve finite games, run discretization schedules,
// compute Wasserstein distances, run fictitious play and the verification
// suite. Reports are JSON on stdout; --pretty switches to tables.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minimax/builtins.hpp"
#include "minimax/discretization.hpp"
#include "minimax/errors.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/io.hpp"
#include "minimax/transport.hpp"
#include "minimax/verify/acceptance.hpp"

namespace {

using minimax::io::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct RunConfig {
  std::vector<std::string> inputs;
  std::string builtin;
  std::size_t n = 4;
  std::string family;
  std::vector<double> family_params;
  std::vector<double> mesh;
  std::size_t iters = 10000;
  double k = 1.0;
  double tol = 1e-8;
  bool pretty = false;
  bool deterministic = false;
  std::string filter;
  bool inject_fault = false;
  std::string output;
};

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Output {
 public:
  explicit Output(const RunConfig& cfg) : cfg_(cfg) {
    if (!cfg.output.empty()) {
      file_.open(cfg.output);
      if (!file_) throw minimax::InputError("cannot write " + cfg.output);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  void emit(json report) {
    if (!cfg_.deterministic) report["timestamp"] = utc_timestamp();
    stream() << report.dump(2) << "\n";
  }

 private:
  const RunConfig& cfg_;
  std::ofstream file_;
};

minimax::FiniteDecisionProblem load_problem(const RunConfig& cfg) {
  if (!cfg.builtin.empty()) {
    if (!cfg.inputs.empty()) throw minimax::InputError("give either --input or --builtin, not both");
    return minimax::problem_by_name(cfg.builtin, cfg.n);
  }
  if (cfg.inputs.size() != 1) throw minimax::InputError("expected exactly one --input problem file");
  return minimax::io::load_problem(cfg.inputs.front());
}

int cmd_solve(const RunConfig& cfg) {
  const auto problem = load_problem(cfg);
  const auto solution = minimax::minimax_lp(problem);
  const auto saddle = minimax::certify_saddle(problem, solution, cfg.tol);
  Output out(cfg);
  if (cfg.pretty) {
    auto& os = out.stream();
    os << "value      " << g12(solution.value) << "\n"
       << "gap        " << g12(solution.duality_gap) << "\n"
       << "certified  " << (saddle.passed() ? "yes" : "no") << " (tol " << g12(cfg.tol) << ")\n"
       << "least favorable prior\n";
    for (std::size_t t = 0; t < problem.num_theta(); ++t) {
      os << "  " << problem.theta_labels()[t].to_string() << "\t" << g12(solution.least_favorable_prior[t]) << "\n";
    }
    os << "minimax procedure (rows: observations)\n";
    for (std::size_t x = 0; x < problem.num_obs(); ++x) {
      os << "  " << problem.obs_labels()[x].to_string() << ":";
      for (double v : solution.minimax_procedure.matrix().row(x)) os << "\t" << g12(v);
      os << "\n";
    }
    return kExitOk;
  }
  out.emit(minimax::io::solve_report(solution, saddle.passed()));
  return kExitOk;
}

int cmd_approximate(const RunConfig& cfg) {
  if (cfg.family.empty()) throw minimax::InputError("--family is required");
  const auto family = minimax::family_by_name(cfg.family, cfg.family_params);
  const auto results = minimax::lf_prior_sequence(family, cfg.mesh);
  Output out(cfg);
  if (cfg.pretty) {
    auto& os = out.stream();
    os << "family " << family.family_id << ", k = " << g12(family.lipschitz_k) << "\n";
    os << "mesh\tvalue\tmaximin\tinterval\tprior support\n";
    for (const auto& r : results) {
      std::size_t support = 0;
      for (double w : r.prior.weights()) support += w > 1e-12 ? 1 : 0;
      os << g12(r.mesh) << "\t" << g12(r.discrete_value) << "\t" << g12(r.discrete_maximin) << "\t[" << g12(r.interval_lo)
         << ", " << g12(r.interval_hi) << "]\t" << support << "\n";
    }
    return kExitOk;
  }
  json report;
  report["family"] = family.family_id;
  report["lipschitz_k"] = family.lipschitz_k;
  report["results"] = minimax::io::approximation_report(results);
  out.emit(std::move(report));
  return kExitOk;
}

int cmd_wasserstein(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) throw minimax::InputError("expected two measure files");
  const auto mu = minimax::io::load_measure(cfg.inputs[0]);
  const auto nu = minimax::io::load_measure(cfg.inputs[1]);
  const double distance = minimax::wk_discrete(mu, nu, minimax::line_distance, cfg.k);
  json report;
  report["k"] = minimax::io::round12(cfg.k);
  report["distance"] = minimax::io::round12(distance);
  std::optional<double> oracle;
  if (cfg.k == 1.0) {
    oracle = minimax::w1_1d(mu, nu);
    report["cdf_oracle"] = minimax::io::round12(*oracle);
    report["oracle_agrees"] = std::abs(*oracle - distance) <= 1e-9;
  }
  Output out(cfg);
  if (cfg.pretty) {
    out.stream() << "W_" << g12(cfg.k) << " = " << g12(distance) << "\n";
    if (oracle) out.stream() << "CDF oracle = " << g12(*oracle) << "\n";
    return kExitOk;
  }
  out.emit(std::move(report));
  return kExitOk;
}

int cmd_fp(const RunConfig& cfg) {
  if (cfg.iters == 0) throw minimax::InputError("--iters must be at least 1");
  const auto problem = load_problem(cfg);
  const auto result = minimax::fictitious_play(problem, cfg.iters);
  Output out(cfg);
  if (cfg.pretty) {
    out.stream() << "iterations " << cfg.iters << "\nlower " << g12(result.lower_bound) << "\nupper "
                 << g12(result.upper_bound) << "\nwidth " << g12(result.upper_bound - result.lower_bound) << "\n";
    return kExitOk;
  }
  out.emit(minimax::io::fictitious_play_report(result, cfg.iters));
  return kExitOk;
}

int cmd_build(const RunConfig& cfg) {
  if (cfg.builtin.empty()) throw minimax::InputError("--builtin is required");
  Output out(cfg);
  out.stream() << minimax::io::problem_to_json(minimax::problem_by_name(cfg.builtin, cfg.n)).dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  minimax::verify::AcceptanceOptions options;
  options.filter = cfg.filter;
  options.inject_loss_perturbation = cfg.inject_fault;
  const auto results = minimax::verify::run_acceptance(options);
  if (results.empty()) throw minimax::InputError("filter '" + cfg.filter + "' selects no checks");
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  Output out(cfg);
  if (cfg.pretty) {
    for (const auto& r : results) out.stream() << minimax::verify::format_result(r) << "\n";
    out.stream() << (all ? "all checks passed" : "verification FAILED") << "\n";
  } else {
    json checks = json::array();
    for (const auto& r : results) {
      json c{{"id", r.id}, {"group", r.group}, {"title", r.title}, {"passed", r.passed}};
      if (!cfg.deterministic) {
        c["detail"] = r.detail;
        c["seconds"] = minimax::io::round12(r.seconds);
      }
      checks.push_back(std::move(c));
    }
    out.emit(json{{"passed", all}, {"checks", checks}});
  }
  return all ? kExitOk : kExitVerifyFailed;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_flag("--pretty", cfg.pretty, "Human-readable table instead of JSON");
  cmd->add_flag("--deterministic", cfg.deterministic, "Suppress the timestamp (and timings)");
  cmd->add_option("-o,--output", cfg.output, "Write the report to a file instead of stdout");
}

void add_problem_source(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-i,--input,input", cfg.inputs, "Problem JSON file");
  cmd->add_option("--builtin", cfg.builtin, "Builtin problem: pick_smaller, clamp, binary_test, matching_pennies");
  cmd->add_option("-n", cfg.n, "Truncation size for builtin problems");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax values, least favorable priors and certificates for statistical decision problems"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* solve = app.add_subcommand("solve", "Solve a finite problem exactly (LP) and certify the saddle point");
  add_problem_source(solve, cfg);
  solve->add_option("--tol", cfg.tol, "Certificate tolerance")->check(CLI::NonNegativeNumber);
  add_common(solve, cfg);

  auto* approx = app.add_subcommand("approximate", "Discretize a builtin metric family over a mesh schedule");
  approx->add_option("--family", cfg.family, "location, bernoulli or clamp");
  approx->add_option("--param", cfg.family_params, "Family parameters")->delimiter(',');
  approx->add_option("--mesh", cfg.mesh, "Strictly decreasing mesh schedule (comma list)")->delimiter(',');
  add_common(approx, cfg);

  auto* wass = app.add_subcommand("wasserstein", "k-Wasserstein distance between two measure files");
  wass->add_option("-i,--input,input", cfg.inputs, "Two measure JSON files");
  wass->add_option("--k", cfg.k, "Lipschitz order k");
  add_common(wass, cfg);

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--filter", cfg.filter, "Only checks whose group or id contains this text");
  verify->add_flag("--inject-loss-perturbation", cfg.inject_fault,
                   "Certify against a perturbed loss; the minimax-equality check must fail");
  add_common(verify, cfg);

  auto* fp = app.add_subcommand("fp", "Fictitious play bounds for a finite problem");
  add_problem_source(fp, cfg);
  fp->add_option("--iters", cfg.iters, "Iterations");
  add_common(fp, cfg);

  auto* build = app.add_subcommand("build", "Print a builtin problem as a problem file");
  build->add_option("--builtin", cfg.builtin, "pick_smaller, clamp, binary_test, matching_pennies");
  build->add_option("-n", cfg.n, "Truncation size");
  build->add_option("-o,--output", cfg.output, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*approx) return cmd_approximate(cfg);
    if (*wass) return cmd_wasserstein(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*fp) return cmd_fp(cfg);
    if (*build) return cmd_build(cfg);
  } catch (const minimax::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const minimax::EvaluationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
