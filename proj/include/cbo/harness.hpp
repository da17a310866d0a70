#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbo/diagnostics.hpp"
#include "cbo/dynamics.hpp"
#include "cbo/objectives.hpp"
#include "cbo/paramcheck.hpp"

namespace cbo::harness {

// One experiment, fully determined by a single config file plus the seed.
struct ExperimentConfig {
  std::string objective_name;
  int dim = 1;
  std::vector<double> shift;   // rastrigin/ackley
  std::vector<double> center;  // quadratic

  InitSpec init;
  CboParams params;
  std::int64_t particles = 100;
  int runs = 1;
  std::uint64_t seed = 0;
  double tolerance = 0.05;
  RecordSpec record;
  std::string output;

  std::optional<GrowthBounds> growth_override;
  std::optional<double> L_m;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;

  Objective make_objective() const;  // throws ConfigError on unknown names
  void validate() const;

  // FNV-1a over the canonical (key-sorted) config serialization and the
  // seed; identifies (config, seed) independent of key order in the file.
  std::string hash(std::uint64_t run_seed) const;
};

struct ExperimentSummary {
  std::vector<RunRecord> records;
  double success_rate = 0.0;
  double mean_final_dist = 0.0;  // over non-diverged runs
  int divergences = 0;
  paramcheck::ValidationReport validation;
};

// Executes cfg.runs runs with seeds cfg.seed + 0 .. cfg.seed + runs-1,
// parallel across runs. A diverged run counts as a failure, never an error.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

struct SweepSpec {
  ExperimentConfig base;
  std::vector<double> kappas;
  std::vector<double> deltas;
  std::vector<std::int64_t> particle_counts;  // empty: use base.particles
  int runs_per_cell = 30;

  static SweepSpec from_json(const nlohmann::json& j);
  static SweepSpec from_file(const std::string& path);
};

struct SweepCell {
  double delta = 0.0;
  double kappa = 0.0;
  std::int64_t particles = 0;
  double rate = 0.0;
  int runs = 0;
  int divergences = 0;

  bool operator==(const SweepCell&) const = default;
};

struct SweepTable {
  std::vector<SweepCell> cells;  // delta-major, then kappa, then particles
  bool particles_axis = false;   // true when the sweep varied N

  bool operator==(const SweepTable&) const = default;
};

// Fills every cell; a pure function of (spec, base seed). Per-cell run seeds
// are base + cell_index*runs_per_cell + r, so cells are independent and any
// scheduling yields the same table.
SweepTable run_sweep(const SweepSpec& spec);

void emit_csv(const SweepTable& table, const std::string& path);
void emit_csv(const diagnostics::TrajectorySeries& series, const std::string& path);
void emit_csv(const ExperimentSummary& summary, int dim, const std::string& path);
SweepTable parse_sweep_csv(const std::string& path);

// Entry point behind the cbo binary. Exit codes: 0 success, 1 configuration
// error, 2 I/O error. Divergent runs do not affect the exit code.
int cli(int argc, const char* const* argv);

}  // namespace cbo::harness
