#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbo/dynamics.hpp"
#include "cbo/objectives.hpp"

namespace cbo::diagnostics {

// Time series of scalar or d-vector records; times strictly increasing.
struct TrajectorySeries {
  std::vector<double> times;
  std::vector<std::vector<double>> values;
  std::string label;
  std::optional<double> reference_level;

  TrajectorySeries() = default;
  TrajectorySeries(std::vector<double> t, std::vector<std::vector<double>> v, std::string lbl,
                   std::optional<double> ref = std::nullopt);

  std::size_t size() const { return times.size(); }
  int dim() const { return values.empty() ? 1 : static_cast<int>(values.front().size()); }
};

// Euclidean distance to the nearest member of the minimizer set.
double dist_to_set(std::span<const double> x, const MinimizerSet& minimizers);

// Exact Wasserstein-2 between 1-d empirical measures of equal size:
// sqrt((1/n) sum (a_(i) - b_(i))^2) over order statistics. Inputs sorted.
double w2_1d(std::span<const double> sorted_a, std::span<const double> sorted_b);

// Convenience overload that sorts copies first.
double w2_1d_unsorted(std::vector<double> a, std::vector<double> b);

enum class NoiseCoupling {
  Independent,  // run B draws from a seed derived independently of run A's
  Shared,       // both runs consume the identical noise stream
};

// Evolves two ensembles from initA and initB under the same parameters and
// reports w2_1d between them at the checkpoint times, averaged over seeds.
// 1-d objectives only. Decay of this series is a necessary signature of the
// W2 contraction to the invariant law (each trajectory's distance to it
// bounds their mutual distance).
TrajectorySeries contraction_probe(const CboParams& params, const Objective& obj,
                                   const InitSpec& init_a, const InitSpec& init_b,
                                   std::int64_t n_particles, std::span<const std::uint64_t> seeds,
                                   std::span<const double> checkpoints,
                                   NoiseCoupling coupling = NoiseCoupling::Independent);

struct InvariantMeanResult {
  std::vector<double> residual;            // xbar_tail - kappa * m_tail
  std::vector<double> particle_mean_tail;  // time-and-seed averaged particle mean
  std::vector<double> consensus_tail;      // time-and-seed averaged consensus
  std::vector<double> residual_se;         // per-axis standard error over seeds
  std::int64_t tail_begin = 0;
  std::int64_t tail_end = 0;
};

// Step range [begin, end) over which tail statistics are taken.
using StepRange = std::pair<std::int64_t, std::int64_t>;

// The last `fraction` of an n_steps run (recorded states 0..n_steps).
StepRange tail_last_fraction(std::int64_t n_steps, double fraction);

// Stationarity probe of the identity mean(x) = kappa * m_alpha: runs the
// dynamics per seed, averages the particle mean and the consensus over the
// tail window, and reports the residual xbar - kappa*m per axis.
InvariantMeanResult invariant_mean_probe(const CboParams& params, const Objective& obj,
                                         const InitSpec& init, std::int64_t n_particles,
                                         std::span<const std::uint64_t> seeds,
                                         StepRange tail_window);

// Extracts the recorded second-moment series, optionally attaching a C2
// reference level. Throws InputError when the series was not recorded.
TrajectorySeries moment_series(const RunRecord& record,
                               std::optional<double> c2_reference = std::nullopt);

}  // namespace cbo::diagnostics
