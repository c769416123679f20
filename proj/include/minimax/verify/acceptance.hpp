#pragma once

#include <functional>
#include <string>
#include <vector>

namespace minimax::verify {

struct CheckResult {
  std::string id;
  std::string group;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Runs only checks whose group or id contains this text (empty: all).
  std::string filter;
  /// Certifies saddle points against a problem with one perturbed loss
  /// entry, so the minimax-equality check must fail.
  bool inject_loss_perturbation = false;
};

struct AcceptanceCheck {
  std::string id;
  std::string group;
  std::string title;
  std::function<CheckResult(const AcceptanceOptions&)> run;
};

const std::vector<AcceptanceCheck>& acceptance_checks();

/// Runs the selected checks in declaration order.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS id title (detail) [seconds]" style line.
std::string format_result(const CheckResult& result);

}  // namespace minimax::verify
