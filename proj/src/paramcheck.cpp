#include "cbo/paramcheck.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace cbo::paramcheck {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

std::pair<double, double> compute_b_constants(const GrowthConstants& g) {
  const double b2 = 2.0 * (g.c_u / g.c_ell) * (1.0 + 1.0 / (g.alpha * g.M * g.M * g.c_ell));
  return {g.M * g.M + b2, b2};
}

std::pair<double, double> compute_gamma_C2(const CboParams& p, double b1, double b2, int dim) {
  const double drive = p.lambda * p.kappa / 2.0 + p.sigma * p.sigma * (1.0 + p.delta) * p.kappa * p.kappa;
  const double gamma = p.lambda * (1.0 - p.kappa / 2.0) - p.sigma * p.sigma * (1.0 + p.delta) - b2 * drive;
  const double C2 = drive * b1 + 0.5 * p.sigma * p.sigma * p.delta * (p.delta + 1.0) * dim;
  return {gamma, C2};
}

TheoryConstants compute_theory_constants(const CboParams& p, const GrowthConstants& g, int dim) {
  const auto [b1, b2] = compute_b_constants(g);
  const auto [gamma, C2] = compute_gamma_C2(p, b1, b2, dim);
  return {b1, b2, gamma, C2};
}

CheckResult validate_moment_bound(const CboParams& p, const GrowthConstants& g, int dim) {
  const auto [b1, b2] = compute_b_constants(g);
  const auto [gamma, C2] = compute_gamma_C2(p, b1, b2, dim);
  const double b2_alpha_free = 2.0 * (g.c_u / g.c_ell) * (1.0 + 1.0 / (g.M * g.M * g.c_ell));

  CheckResult r;
  r.name = "moment-bound";
  r.verdict = gamma > 0.0 ? Verdict::Pass : Verdict::Fail;
  r.values = {{"gamma", gamma}, {"C2", C2}, {"b1", b1}, {"b2", b2},
              {"b2_alpha_ge_1", b2_alpha_free}};
  const bool simple = p.delta == 1.0 && p.kappa < 1.0 / (2.0 * (1.0 + b2)) &&
                      p.lambda > 16.0 * p.sigma * p.sigma;
  r.values["simple_config"] = simple ? 1.0 : 0.0;
  r.note = simple ? "simple sufficient configuration holds (delta=1, kappa<1/(2(1+b2)), lambda>16 sigma^2)"
                  : "simple sufficient configuration does not hold";
  return r;
}

CheckResult validate_existence(const CboParams& p, double b2) {
  const double lhs = 2.0 * p.lambda - 4.0;
  const double rhs = p.lambda * p.kappa * (1.0 + b2) + 4.0 * p.kappa * p.kappa * b2;

  CheckResult r;
  r.name = "existence";
  r.verdict = lhs > rhs ? Verdict::Pass : Verdict::Fail;
  r.values = {{"lhs", lhs}, {"rhs", rhs}, {"b2", b2}};
  const bool simple = p.kappa < 1.0 / (2.0 * (1.0 + b2)) && p.lambda > 4.0;
  r.values["simple_pair"] = simple ? 1.0 : 0.0;
  r.note = simple ? "simple sufficient pair holds (kappa<1/(2(1+b2)), lambda>4)"
                  : "simple sufficient pair does not hold";
  return r;
}

CheckResult validate_contraction(const CboParams& p, double L_m) {
  const double theta = 2.0 * p.lambda - p.lambda * p.kappa - 2.0 * p.sigma * p.sigma;
  const double a = p.kappa * (p.lambda + 2.0 * p.sigma * p.sigma * p.kappa) * L_m * L_m;
  const double kappa_bound =
      (2.0 * p.lambda - 2.0 * p.sigma * p.sigma) / (p.lambda * (2.0 * L_m * L_m + 1.0));

  CheckResult r;
  r.name = "contraction";
  r.verdict = (theta > 0.0 && theta > a) ? Verdict::Pass : Verdict::Fail;
  r.values = {{"theta", theta}, {"a", a}, {"Theta", theta - a}, {"L_m", L_m},
              {"kappa_sufficient_bound", kappa_bound}};
  r.note = "L_m is an empirical or assumed stability constant; nothing in the "
           "dynamics depends on it";
  return r;
}

bool ValidationReport::overall_pass() const {
  for (const auto& c : checks) {
    if (c.verdict == Verdict::Fail) return false;
  }
  return true;
}

std::string ValidationReport::format() const {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const auto& c : checks) {
    os << std::left << std::setw(14) << c.name << std::setw(9) << to_string(c.verdict);
    bool first = true;
    for (const auto& [k, v] : c.values) {
      os << (first ? "" : "  ") << k << "=" << v;
      first = false;
    }
    if (!c.note.empty()) os << "  [" << c.note << "]";
    os << "\n";
  }
  os << "overall        " << (overall_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

ValidationReport validate_all(const CboParams& p, const GrowthConstants& g, int dim,
                              std::optional<double> L_m) {
  ValidationReport report;
  report.constants = compute_theory_constants(p, g, dim);
  report.constants_available = true;
  report.checks.push_back(validate_moment_bound(p, g, dim));
  report.checks.push_back(validate_existence(p, report.constants.b2));
  if (L_m) {
    report.checks.push_back(validate_contraction(p, *L_m));
  } else {
    CheckResult r;
    r.name = "contraction";
    r.verdict = Verdict::Skipped;
    r.note = "no L_m supplied";
    report.checks.push_back(r);
  }
  return report;
}

ValidationReport skipped_report(const std::string& why) {
  ValidationReport report;
  for (const char* name : {"moment-bound", "existence", "contraction"}) {
    CheckResult r;
    r.name = name;
    r.verdict = Verdict::Skipped;
    r.note = why;
    report.checks.push_back(r);
  }
  return report;
}

}  // namespace cbo::paramcheck
