#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbo/dynamics.hpp"

namespace cbo::paramcheck {

struct GrowthConstants {
  double c_ell;
  double c_u;
  double M;
  double alpha;
};

struct TheoryConstants {
  double b1;
  double b2;
  double gamma;
  double C2;
};

enum class Verdict { Pass, Fail, Skipped };

const char* to_string(Verdict v);

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Skipped;
  std::map<std::string, double> values;
  std::string note;
};

// b2 = 2 (c_u / c_ell) (1 + 1 / (alpha M^2 c_ell)), b1 = M^2 + b2.
// The alpha dependence is kept exact; the alpha-independent value valid for
// alpha >= 1 (b2 at alpha = 1) is reported alongside by the validators.
std::pair<double, double> compute_b_constants(const GrowthConstants& g);

// gamma = lambda(1 - kappa/2) - sigma^2(1 + delta)
//         - b2 (lambda kappa/2 + sigma^2 (1 + delta) kappa^2)
// C2    = (lambda kappa/2 + sigma^2 (1 + delta) kappa^2) b1
//         + (sigma^2/2) delta (delta + 1) d
std::pair<double, double> compute_gamma_C2(const CboParams& p, double b1, double b2, int dim);

TheoryConstants compute_theory_constants(const CboParams& p, const GrowthConstants& g, int dim);

// Uniform-in-time second-moment bound: PASS iff gamma > 0. Also reports
// whether the simple sufficient configuration holds
// (delta = 1, kappa < 1/(2(1+b2)), lambda > 16 sigma^2).
CheckResult validate_moment_bound(const CboParams& p, const GrowthConstants& g, int dim);

// Invariant-measure existence: PASS iff
//   2 lambda - 4 > lambda kappa (1 + b2) + 4 kappa^2 b2.
// Also flags the simple pair kappa < 1/(2(1+b2)), lambda > 4.
CheckResult validate_existence(const CboParams& p, double b2);

// W2 contraction: with theta = 2 lambda - lambda kappa - 2 sigma^2 and
// a = kappa (lambda + 2 sigma^2 kappa) L_m^2, PASS iff theta > 0 and
// theta > a; reports the margin Theta = theta - a. L_m is user-supplied;
// no formula for it is known, so it is only ever an input.
CheckResult validate_contraction(const CboParams& p, double L_m);

struct ValidationReport {
  std::vector<CheckResult> checks;
  TheoryConstants constants{};
  bool constants_available = false;

  bool overall_pass() const;
  std::string format() const;  // aligned text, one line per check
};

// Aggregates the three validators. Without L_m the contraction check is
// reported as SKIPPED; overall PASS requires every applicable check to pass.
// Validators warn, never block: callers may still run unsupported configs.
ValidationReport validate_all(const CboParams& p, const GrowthConstants& g, int dim,
                              std::optional<double> L_m = std::nullopt);

// Report for objectives without growth metadata: everything SKIPPED.
ValidationReport skipped_report(const std::string& why);

}  // namespace cbo::paramcheck
