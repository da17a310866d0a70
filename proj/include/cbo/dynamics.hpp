#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbo/consensus.hpp"
#include "cbo/ensemble.hpp"
#include "cbo/objectives.hpp"
#include "cbo/rng.hpp"

namespace cbo {

struct CboParams {
  double lambda = 1.0;   // drift rate, 1/time
  double sigma = 0.5;    // noise scale, 1/sqrt(time)
  double alpha = 1e15;   // inverse temperature
  double kappa = 1.0;    // consensus rescaling, in (0, 1]
  double delta = 0.0;    // diffusion regularizer, >= 0
  double dt = 0.01;      // step size, time
  std::int64_t n_steps = 0;

  double horizon() const { return dt * static_cast<double>(n_steps); }
  // Throws ConfigError naming the offending field. kappa in (0,1] and
  // delta >= 0 are accepted even where the theory wants kappa < 1, delta > 0.
  void validate() const;
};

struct StepReport {
  std::int64_t step = 0;
  ConsensusPoint consensus;     // the pre-step consensus used for the update
  double second_moment = 0.0;   // (1/n) sum |x_i|^2 of the post-step ensemble
  std::vector<double> mean;     // post-step coordinate-wise mean
};

// Per-series opt-in recording; summaries only by default so large runs stay
// memory-bounded.
struct RecordSpec {
  bool consensus = false;
  bool second_moment = false;
  bool mean = false;
  bool log_error = false;  // log distance of the consensus to the minimizer set
  std::int64_t stride = 1;
};

struct RunRecord {
  std::vector<double> final_consensus;
  double final_ess = 1.0;
  std::optional<bool> success;
  std::optional<double> final_dist;
  double initial_second_moment = 0.0;
  double final_second_moment = 0.0;

  bool diverged = false;
  std::int64_t diverged_step = -1;

  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;

  // Recorded series; times[j] pairs with the j-th entry of each series.
  std::vector<double> times;
  std::vector<std::vector<double>> consensus_series;
  std::vector<double> second_moment_series;
  std::vector<std::vector<double>> mean_series;
  std::vector<double> log_error_series;
};

// One Euler-Maruyama step given a consensus computed from the current
// ensemble: for every particle i and axis k, with y = x[k] - kappa*m[k],
//   x[k] <- x[k] - lambda*y*dt + sigma*(delta + |y|)*sqrt(dt)*xi(i, step, k).
// Refreshes the objective cache afterward. Throws DivergenceError (reporting
// step, particle and a parameter echo) if any coordinate becomes non-finite.
void em_advance(Ensemble& ens, const ConsensusPoint& consensus, const CboParams& params,
                const Objective& obj, const RngStream& stream, std::int64_t step);

// em_advance with the consensus computed here from the pre-step ensemble
// (once, used for all particles), plus post-step summaries.
StepReport em_step(Ensemble& ens, const CboParams& params, const Objective& obj,
                   const RngStream& stream, std::int64_t step);

// Single-threaded straight-loop reference of the same update rule.
StepReport em_step_reference(Ensemble& ens, const CboParams& params, const Objective& obj,
                             const RngStream& stream, std::int64_t step);

// True iff the distance from the point to the nearest minimizer is < tol.
bool success_test(std::span<const double> final_consensus, const MinimizerSet& minimizers,
                  double tol);

// Full trajectory: init, n_steps Euler-Maruyama steps, recording as
// requested. The success flag is set when the objective's minimizers are
// known. Propagates DivergenceError with the step at which it occurred.
RunRecord run(const InitSpec& init, const CboParams& params, const Objective& obj,
              std::int64_t n_particles, std::uint64_t seed, const RecordSpec& record = {},
              double success_tol = 0.05);

}  // namespace cbo
