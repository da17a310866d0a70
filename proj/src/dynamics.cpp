#include "cbo/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "cbo/errors.hpp"

namespace cbo {

namespace {

std::string echo_params(const CboParams& p) {
  std::ostringstream os;
  os << "lambda=" << p.lambda << " sigma=" << p.sigma << " alpha=" << p.alpha
     << " kappa=" << p.kappa << " delta=" << p.delta << " dt=" << p.dt
     << " steps=" << p.n_steps;
  return os.str();
}

}  // namespace

void CboParams::validate() const {
  auto bad = [](const char* field, const std::string& why) {
    throw ConfigError(std::string("params.") + field + ": " + why);
  };
  if (!std::isfinite(lambda) || lambda <= 0.0) bad("lambda", "must be finite and > 0");
  if (!std::isfinite(sigma) || sigma < 0.0) bad("sigma", "must be finite and >= 0");
  if (!std::isfinite(alpha) || alpha < 0.0) bad("alpha", "must be finite and >= 0");
  if (!std::isfinite(kappa) || kappa <= 0.0 || kappa > 1.0) bad("kappa", "must be in (0, 1]");
  if (!std::isfinite(delta) || delta < 0.0) bad("delta", "must be finite and >= 0");
  if (!std::isfinite(dt) || dt <= 0.0) bad("dt", "must be finite and > 0");
  if (n_steps < 0) bad("steps", "must be >= 0");
}

void em_advance(Ensemble& ens, const ConsensusPoint& consensus, const CboParams& params,
                const Objective& obj, const RngStream& stream, std::int64_t step) {
  const std::int64_t n = ens.n();
  const int d = ens.dim();
  const double lam_dt = params.lambda * params.dt;
  const double sqrt_dt = std::sqrt(params.dt);
  const double sigma = params.sigma;
  const double delta = params.delta;
  const double kappa = params.kappa;
  const double* m = consensus.point.data();
  auto pos = ens.positions();

  std::int64_t bad = std::numeric_limits<std::int64_t>::max();
  auto update_particle = [&](std::int64_t i) {
    double* row = pos.data() + i * d;
    bool finite = true;
    for (int k = 0; k < d; ++k) {
      const double y = row[k] - kappa * m[k];
      double x = row[k] - lam_dt * y;
      if (sigma != 0.0) {
        const double xi = stream.normal(static_cast<std::uint64_t>(i),
                                        static_cast<std::uint64_t>(step),
                                        static_cast<std::uint32_t>(k));
        x += sigma * (delta + std::abs(y)) * sqrt_dt * xi;
      }
      row[k] = x;
      finite = finite && std::isfinite(x);
    }
    return finite;
  };
  if (n >= 2048) {
#pragma omp parallel for schedule(static) reduction(min : bad)
    for (std::int64_t i = 0; i < n; ++i) {
      if (!update_particle(i)) bad = std::min(bad, i);
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      if (!update_particle(i) && bad == std::numeric_limits<std::int64_t>::max()) bad = i;
    }
  }
  ens.mark_stale();
  if (bad != std::numeric_limits<std::int64_t>::max()) {
    throw DivergenceError(step, bad,
                          "divergence at step " + std::to_string(step) + ", particle " +
                              std::to_string(bad) + " (" + echo_params(params) + ")");
  }
  refresh_fvalues(ens, obj);
  // A finite position whose objective value overflows is a diverged run too;
  // catching it here keeps the error typed instead of surfacing later as a
  // consensus input error.
  const auto fv = ens.fvalues();
  for (std::int64_t i = 0; i < n; ++i) {
    if (!std::isfinite(fv[static_cast<std::size_t>(i)])) {
      throw DivergenceError(step, i,
                            "divergence at step " + std::to_string(step) + ", particle " +
                                std::to_string(i) + ": objective value is non-finite (" +
                                echo_params(params) + ")");
    }
  }
}

StepReport em_step(Ensemble& ens, const CboParams& params, const Objective& obj,
                   const RngStream& stream, std::int64_t step) {
  params.validate();
  if (!ens.fresh()) refresh_fvalues(ens, obj);
  StepReport report;
  report.step = step;
  report.consensus = consensus_point(ens, params.alpha);
  em_advance(ens, report.consensus, params, obj, stream, step);
  report.second_moment = ens.second_moment();
  report.mean = ens.mean();
  return report;
}

StepReport em_step_reference(Ensemble& ens, const CboParams& params, const Objective& obj,
                             const RngStream& stream, std::int64_t step) {
  params.validate();
  if (!ens.fresh()) refresh_fvalues(ens, obj);

  StepReport report;
  report.step = step;
  report.consensus = consensus_point_reference(ens, params.alpha);

  const std::int64_t n = ens.n();
  const int d = ens.dim();
  const double sqrt_dt = std::sqrt(params.dt);
  const auto& m = report.consensus.point;
  for (std::int64_t i = 0; i < n; ++i) {
    auto row = ens.row(i);
    for (int k = 0; k < d; ++k) {
      const double y = row[static_cast<std::size_t>(k)] - params.kappa * m[static_cast<std::size_t>(k)];
      double x = row[static_cast<std::size_t>(k)] - params.lambda * y * params.dt;
      if (params.sigma != 0.0) {
        x += params.sigma * (params.delta + std::abs(y)) * sqrt_dt *
             stream.normal(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(step),
                           static_cast<std::uint32_t>(k));
      }
      row[static_cast<std::size_t>(k)] = x;
      if (!std::isfinite(x)) {
        ens.mark_stale();
        throw DivergenceError(step, i,
                              "divergence at step " + std::to_string(step) + ", particle " +
                                  std::to_string(i) + " (" + echo_params(params) + ")");
      }
    }
  }
  ens.mark_stale();
  refresh_fvalues(ens, obj);
  for (std::int64_t i = 0; i < n; ++i) {
    if (!std::isfinite(ens.fvalues()[static_cast<std::size_t>(i)])) {
      throw DivergenceError(step, i,
                            "divergence at step " + std::to_string(step) + ", particle " +
                                std::to_string(i) + ": objective value is non-finite (" +
                                echo_params(params) + ")");
    }
  }

  double sm = 0.0;
  report.mean.assign(static_cast<std::size_t>(d), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto row = ens.row(i);
    for (int k = 0; k < d; ++k) {
      sm += row[static_cast<std::size_t>(k)] * row[static_cast<std::size_t>(k)];
      report.mean[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k)];
    }
  }
  report.second_moment = sm / static_cast<double>(n);
  for (double& v : report.mean) v /= static_cast<double>(n);
  return report;
}

bool success_test(std::span<const double> final_consensus, const MinimizerSet& minimizers,
                  double tol) {
  if (minimizers.empty()) throw InputError("success_test: empty minimizer set");
  if (!(tol > 0.0)) throw InputError("success_test: tolerance must be > 0");
  return minimizers.distance(final_consensus) < tol;
}

RunRecord run(const InitSpec& init, const CboParams& params, const Objective& obj,
              std::int64_t n_particles, std::uint64_t seed, const RecordSpec& record,
              double success_tol) {
  params.validate();
  init.validate(obj.dim);
  if (record.stride < 1) throw ConfigError("record.stride: must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  Ensemble ens = init_ensemble(init, n_particles, obj.dim, seed);
  refresh_fvalues(ens, obj);
  const RngStream stream(seed, RngStream::kDynamics);

  RunRecord rec;
  rec.seed = seed;
  rec.initial_second_moment = ens.second_moment();

  const bool any_series = record.consensus || record.second_moment || record.mean || record.log_error;
  const bool log_error_ok = record.log_error && obj.minimizers && !obj.minimizers->empty();

  auto record_state = [&](std::int64_t k, const ConsensusPoint& cp) {
    rec.times.push_back(params.dt * static_cast<double>(k));
    if (record.consensus) rec.consensus_series.push_back(cp.point);
    if (record.second_moment) rec.second_moment_series.push_back(ens.second_moment());
    if (record.mean) rec.mean_series.push_back(ens.mean());
    if (log_error_ok) {
      const double dist = obj.minimizers->distance(cp.point);
      rec.log_error_series.push_back(std::log(std::max(dist, 1e-300)));
    }
  };

  ConsensusPoint cp;
  for (std::int64_t k = 0;; ++k) {
    cp = consensus_point(ens, params.alpha);
    if (any_series && (k % record.stride == 0 || k == params.n_steps)) record_state(k, cp);
    if (k == params.n_steps) break;
    em_advance(ens, cp, params, obj, stream, k);
  }

  rec.final_consensus = cp.point;
  rec.final_ess = cp.effective_sample_size;
  rec.final_second_moment = ens.second_moment();
  if (obj.minimizers && !obj.minimizers->empty()) {
    rec.final_dist = obj.minimizers->distance(rec.final_consensus);
    rec.success = *rec.final_dist < success_tol;
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace cbo
