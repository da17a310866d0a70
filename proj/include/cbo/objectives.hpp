#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbo/ensemble.hpp"
#include "cbo/errors.hpp"

namespace cbo {

// Constants of the quadratic-growth envelope:
//   f(x) - min f <= c_u (|x|^2 + 1) everywhere, and
//   c_ell |x|^2 <= f(x) - min f for |x| >= M.
struct GrowthBounds {
  double c_ell;
  double c_u;
  double M;
};

// Axis-aligned product of intervals.
struct IntervalBox {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Known global minimizers: discrete points and/or interval boxes.
struct MinimizerSet {
  std::vector<std::vector<double>> points;
  std::vector<IntervalBox> boxes;

  bool empty() const { return points.empty() && boxes.empty(); }
  // Euclidean distance to the nearest member (per-axis clamping for boxes).
  double distance(std::span<const double> x) const;
};

struct Objective {
  std::string name;
  int dim = 1;
  std::function<double(std::span<const double>)> eval;
  std::optional<MinimizerSet> minimizers;
  std::optional<double> min_value;
  std::optional<GrowthBounds> growth;

  double operator()(std::span<const double> x) const { return eval(x); }
};

// Benchmark objectives. Rastrigin constructors take a shift so that both the
// origin-minimized form and the variant minimized at (1,...,1) are
// expressible; the shift is the minimizer.
Objective rastrigin_1d(double shift = 1.0);
Objective rastrigin_nd(int d, std::vector<double> shift = {});
Objective ackley_shifted(int d, std::vector<double> shift);
Objective biminimizer_2d();
Objective quadratic(int d, std::vector<double> center);

// Sample layout for growth verification: points r*u for n_radial radii in
// (0, r_max] crossed with the +/- axis directions plus n_directions random
// unit vectors. Covers |x| <= r_max including the |x| >= M shell.
struct GridSpec {
  double r_max = 100.0;
  int n_radial = 400;
  int n_directions = 32;
  std::uint64_t seed = 1;
};

struct GrowthViolation {
  std::vector<double> x;
  bool lower;  // true: c_ell bound violated, false: c_u bound violated
  double lhs;
  double rhs;
};

struct GrowthReport {
  GridSpec grid;
  int dim = 0;
  std::int64_t points_checked = 0;
  std::vector<GrowthViolation> violations;

  bool pass() const { return violations.empty(); }
  std::string describe() const;
};

// Verifies the growth envelope on the sampled grid. Sampled, not proven.
// Throws ConfigError when the objective carries no growth constants.
GrowthReport check_growth(const Objective& obj, const GridSpec& grid);
GrowthReport check_growth(const Objective& obj, const GrowthBounds& g, const GridSpec& grid);

// Re-evaluates the objective at every particle and marks the cache fresh.
void refresh_fvalues(Ensemble& ens, const Objective& obj);

}  // namespace cbo
