#include "cbo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cbo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

std::vector<double> resolve_shift(int d, std::vector<double> shift, const char* what) {
  if (shift.empty()) return std::vector<double>(static_cast<std::size_t>(d), 0.0);
  if (shift.size() == 1 && d > 1) return std::vector<double>(static_cast<std::size_t>(d), shift[0]);
  if (shift.size() != static_cast<std::size_t>(d)) {
    throw ConfigError(std::string(what) + ": expected " + std::to_string(d) + " entries");
  }
  return shift;
}

}  // namespace

double MinimizerSet::distance(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double dk = x[k] - p[k];
      s += dk * dk;
    }
    best = std::min(best, s);
  }
  for (const auto& box : boxes) {
    double s = 0.0;
    for (std::size_t k = 0; k < box.lo.size(); ++k) {
      const double c = std::clamp(x[k], box.lo[k], box.hi[k]);
      const double dk = x[k] - c;
      s += dk * dk;
    }
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

Objective rastrigin_1d(double shift) {
  Objective obj;
  obj.name = "rastrigin1d";
  obj.dim = 1;
  obj.eval = [shift](std::span<const double> x) {
    const double y = x[0] - shift;
    return 10.0 + y * y - 10.0 * std::cos(kTwoPi * y);
  };
  obj.minimizers = MinimizerSet{{{shift}}, {}};
  obj.min_value = 0.0;
  // Grid-verified envelope; see the growth tests.
  obj.growth = GrowthBounds{0.5, 2.0 * shift * shift + 22.0, 4.0 * (std::abs(shift) + 1.0)};
  return obj;
}

Objective rastrigin_nd(int d, std::vector<double> shift) {
  if (d < 1) throw ConfigError("rastrigin: dim must be >= 1");
  auto s = resolve_shift(d, std::move(shift), "rastrigin.shift");
  Objective obj;
  obj.name = "rastrigin";
  obj.dim = d;
  obj.eval = [s](std::span<const double> x) {
    double total = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double y = x[k] - s[k];
      total += 10.0 + y * y - 10.0 * std::cos(kTwoPi * y);
    }
    return total;
  };
  obj.minimizers = MinimizerSet{{s}, {}};
  obj.min_value = 0.0;
  const double snorm2 = norm2(s);
  obj.growth = GrowthBounds{0.5, 20.0 * d + 2.0 * snorm2 + 2.0, 4.0 * (std::sqrt(snorm2) + 1.0)};
  return obj;
}

Objective ackley_shifted(int d, std::vector<double> shift) {
  if (d < 1) throw ConfigError("ackley: dim must be >= 1");
  auto s = resolve_shift(d, std::move(shift), "ackley.shift");
  Objective obj;
  obj.name = "ackley";
  obj.dim = d;
  obj.eval = [s, d](std::span<const double> x) {
    double r2 = 0.0;
    double csum = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double y = x[k] - s[k];
      r2 += y * y;
      csum += std::cos(kTwoPi * y);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(r2)) - std::exp(csum / d) + std::numbers::e + 20.0;
  };
  obj.minimizers = MinimizerSet{{s}, {}};
  obj.min_value = 0.0;
  // Bounded above, so no quadratic lower growth exists; no envelope shipped.
  return obj;
}

Objective biminimizer_2d() {
  Objective obj;
  obj.name = "biminimizer";
  obj.dim = 2;
  obj.eval = [](std::span<const double> x) {
    const double a = (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 1.0) * (x[1] - 1.0);
    const double b = (x[0] + 1.0) * (x[0] + 1.0) + (x[1] + 1.0) * (x[1] + 1.0);
    return a * b;
  };
  obj.minimizers = MinimizerSet{{{1.0, 1.0}, {-1.0, -1.0}}, {}};
  obj.min_value = 0.0;
  // Quartic growth breaks the quadratic upper envelope; none shipped.
  return obj;
}

Objective quadratic(int d, std::vector<double> center) {
  if (d < 1) throw ConfigError("quadratic: dim must be >= 1");
  auto c = resolve_shift(d, std::move(center), "quadratic.center");
  Objective obj;
  obj.name = "quadratic";
  obj.dim = d;
  obj.eval = [c](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double y = x[k] - c[k];
      s += y * y;
    }
    return s;
  };
  obj.minimizers = MinimizerSet{{c}, {}};
  obj.min_value = 0.0;
  const double cnorm = std::sqrt(norm2(c));
  obj.growth = GrowthBounds{0.5, 2.0 * (1.0 + cnorm * cnorm), std::max(1.0, 4.0 * cnorm + 1.0)};
  return obj;
}

std::string GrowthReport::describe() const {
  std::ostringstream os;
  os << "growth check on " << points_checked << " points (r_max=" << grid.r_max
     << ", n_radial=" << grid.n_radial << ", n_directions=" << grid.n_directions
     << ", seed=" << grid.seed << "): ";
  if (violations.empty()) {
    os << "pass";
  } else {
    os << violations.size() << " violation(s); first at x=(";
    const auto& v = violations.front();
    for (std::size_t k = 0; k < v.x.size(); ++k) os << (k ? "," : "") << v.x[k];
    os << ") " << (v.lower ? "lower" : "upper") << " bound: " << v.lhs << " vs " << v.rhs;
  }
  return os.str();
}

GrowthReport check_growth(const Objective& obj, const GrowthBounds& g, const GridSpec& grid) {
  if (!(g.c_ell > 0.0) || !(g.c_u > 0.0) || !(g.M > 0.0)) {
    throw ConfigError("check_growth: growth constants must be positive");
  }
  if (!(grid.r_max > 0.0) || grid.n_radial < 1) {
    throw ConfigError("check_growth: grid needs r_max > 0 and n_radial >= 1");
  }

  const int d = obj.dim;
  const double fmin = obj.min_value.value_or(0.0);

  // Directions: +/- axes, then random unit vectors from a fixed stream.
  std::vector<std::vector<double>> dirs;
  for (int k = 0; k < d; ++k) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[static_cast<std::size_t>(k)] = 1.0;
    dirs.push_back(e);
    e[static_cast<std::size_t>(k)] = -1.0;
    dirs.push_back(e);
  }
  const RngStream stream(grid.seed, RngStream::kGeneric);
  for (int j = 0; j < grid.n_directions; ++j) {
    std::vector<double> u(static_cast<std::size_t>(d));
    double nrm = 0.0;
    for (int k = 0; k < d; ++k) {
      u[static_cast<std::size_t>(k)] =
          stream.normal(static_cast<std::uint64_t>(j), 0, static_cast<std::uint32_t>(k));
      nrm += u[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    for (double& v : u) v /= nrm;
    dirs.push_back(std::move(u));
  }

  GrowthReport report;
  report.grid = grid;
  report.dim = d;

  std::vector<double> x(static_cast<std::size_t>(d));
  for (const auto& u : dirs) {
    for (int r = 0; r <= grid.n_radial; ++r) {
      const double radius = grid.r_max * static_cast<double>(r) / grid.n_radial;
      for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = radius * u[static_cast<std::size_t>(k)];
      const double fx = obj.eval(x) - fmin;
      ++report.points_checked;
      if (fx > g.c_u * (radius * radius + 1.0)) {
        report.violations.push_back({x, false, fx, g.c_u * (radius * radius + 1.0)});
      }
      if (radius >= g.M && g.c_ell * radius * radius > fx) {
        report.violations.push_back({x, true, g.c_ell * radius * radius, fx});
      }
    }
  }
  return report;
}

GrowthReport check_growth(const Objective& obj, const GridSpec& grid) {
  if (!obj.growth) {
    throw ConfigError("check_growth: objective '" + obj.name + "' has no growth constants");
  }
  return check_growth(obj, *obj.growth, grid);
}

void refresh_fvalues(Ensemble& ens, const Objective& obj) {
  const std::int64_t n = ens.n();
  auto f = ens.fvalues_mut();
  if (n >= 2048) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      f[static_cast<std::size_t>(i)] = obj.eval(ens.row(i));
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      f[static_cast<std::size_t>(i)] = obj.eval(ens.row(i));
    }
  }
  ens.mark_fresh();
}

}  // namespace cbo
