#include "cbo/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "cbo/errors.hpp"

namespace cbo::diagnostics {

TrajectorySeries::TrajectorySeries(std::vector<double> t, std::vector<std::vector<double>> v,
                                   std::string lbl, std::optional<double> ref)
    : times(std::move(t)), values(std::move(v)), label(std::move(lbl)), reference_level(ref) {
  if (times.size() != values.size()) {
    throw InputError("TrajectorySeries: times and values lengths differ");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw InputError("TrajectorySeries: times must be strictly increasing");
    }
  }
  for (const auto& row : values) {
    if (row.size() != values.front().size()) {
      throw InputError("TrajectorySeries: ragged value rows");
    }
  }
}

double dist_to_set(std::span<const double> x, const MinimizerSet& minimizers) {
  if (minimizers.empty()) throw InputError("dist_to_set: empty minimizer set");
  return minimizers.distance(x);
}

double w2_1d(std::span<const double> sorted_a, std::span<const double> sorted_b) {
  if (sorted_a.size() != sorted_b.size()) {
    throw InputError("w2_1d: samples must have equal size");
  }
  if (sorted_a.empty()) throw InputError("w2_1d: empty samples");
  double s = 0.0;
  for (std::size_t i = 0; i < sorted_a.size(); ++i) {
    const double diff = sorted_a[i] - sorted_b[i];
    s += diff * diff;
  }
  return std::sqrt(s / static_cast<double>(sorted_a.size()));
}

double w2_1d_unsorted(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return w2_1d(a, b);
}

TrajectorySeries contraction_probe(const CboParams& params, const Objective& obj,
                                   const InitSpec& init_a, const InitSpec& init_b,
                                   std::int64_t n_particles, std::span<const std::uint64_t> seeds,
                                   std::span<const double> checkpoints, NoiseCoupling coupling) {
  if (obj.dim != 1) throw InputError("contraction_probe: only 1-dimensional objectives");
  params.validate();
  if (seeds.empty()) throw InputError("contraction_probe: need at least one seed");
  if (checkpoints.empty()) throw InputError("contraction_probe: need at least one checkpoint");

  // Snap checkpoint times to step indices.
  std::vector<std::int64_t> check_steps;
  for (double t : checkpoints) {
    const auto k = static_cast<std::int64_t>(std::llround(t / params.dt));
    if (k < 0 || k > params.n_steps) throw InputError("contraction_probe: checkpoint outside horizon");
    check_steps.push_back(k);
  }
  for (std::size_t i = 1; i < check_steps.size(); ++i) {
    if (check_steps[i] <= check_steps[i - 1]) {
      throw InputError("contraction_probe: checkpoints must be strictly increasing");
    }
  }

  std::vector<double> acc(check_steps.size(), 0.0);
  const auto n_seeds = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < n_seeds; ++s) {
    const std::uint64_t seed_a = seeds[static_cast<std::size_t>(s)];
    const std::uint64_t seed_b =
        coupling == NoiseCoupling::Shared ? seed_a : mix_seed(seed_a, 0x636F6E7472616374ull);
    Ensemble ens_a = init_ensemble(init_a, n_particles, 1, seed_a);
    Ensemble ens_b = init_ensemble(init_b, n_particles, 1, seed_b);
    refresh_fvalues(ens_a, obj);
    refresh_fvalues(ens_b, obj);
    const RngStream stream_a(seed_a, RngStream::kDynamics);
    const RngStream stream_b(seed_b, RngStream::kDynamics);

    std::vector<double> local(check_steps.size(), 0.0);
    std::size_t next = 0;
    for (std::int64_t k = 0; k <= params.n_steps; ++k) {
      if (next < check_steps.size() && k == check_steps[next]) {
        local[next] = w2_1d_unsorted(
            std::vector<double>(ens_a.positions().begin(), ens_a.positions().end()),
            std::vector<double>(ens_b.positions().begin(), ens_b.positions().end()));
        ++next;
      }
      if (next == check_steps.size() || k == params.n_steps) break;
      em_advance(ens_a, consensus_point(ens_a, params.alpha), params, obj, stream_a, k);
      em_advance(ens_b, consensus_point(ens_b, params.alpha), params, obj, stream_b, k);
    }
#pragma omp critical
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += local[j];
  }

  std::vector<double> times;
  std::vector<std::vector<double>> values;
  for (std::size_t j = 0; j < check_steps.size(); ++j) {
    times.push_back(params.dt * static_cast<double>(check_steps[j]));
    values.push_back({acc[j] / static_cast<double>(n_seeds)});
  }
  return TrajectorySeries(std::move(times), std::move(values), "w2_between_laws");
}

StepRange tail_last_fraction(std::int64_t n_steps, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) throw InputError("tail fraction must be in (0, 1]");
  const auto begin = static_cast<std::int64_t>(std::floor((1.0 - fraction) * static_cast<double>(n_steps)));
  return {std::min(begin, n_steps), n_steps + 1};
}

InvariantMeanResult invariant_mean_probe(const CboParams& params, const Objective& obj,
                                         const InitSpec& init, std::int64_t n_particles,
                                         std::span<const std::uint64_t> seeds,
                                         StepRange tail_window) {
  params.validate();
  if (seeds.empty()) throw InputError("invariant_mean_probe: need at least one seed");
  const auto [tail_begin, tail_end] = tail_window;
  if (tail_begin < 0 || tail_end <= tail_begin || tail_end > params.n_steps + 1) {
    throw InputError("invariant_mean_probe: tail window outside the run horizon");
  }

  const int d = obj.dim;
  const auto n_seeds = static_cast<std::int64_t>(seeds.size());
  std::vector<std::vector<double>> per_seed_residual(static_cast<std::size_t>(n_seeds));
  std::vector<std::vector<double>> per_seed_mean(static_cast<std::size_t>(n_seeds));
  std::vector<std::vector<double>> per_seed_consensus(static_cast<std::size_t>(n_seeds));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < n_seeds; ++s) {
    RecordSpec rec;
    rec.consensus = true;
    rec.mean = true;
    RunRecord rr = run(init, params, obj, n_particles, seeds[static_cast<std::size_t>(s)], rec);
    std::vector<double> xbar(static_cast<std::size_t>(d), 0.0);
    std::vector<double> mbar(static_cast<std::size_t>(d), 0.0);
    const auto count = static_cast<double>(tail_end - tail_begin);
    for (std::int64_t k = tail_begin; k < tail_end; ++k) {
      for (int j = 0; j < d; ++j) {
        xbar[static_cast<std::size_t>(j)] += rr.mean_series[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] / count;
        mbar[static_cast<std::size_t>(j)] += rr.consensus_series[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] / count;
      }
    }
    std::vector<double> res(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      res[static_cast<std::size_t>(j)] = xbar[static_cast<std::size_t>(j)] - params.kappa * mbar[static_cast<std::size_t>(j)];
    }
    per_seed_residual[static_cast<std::size_t>(s)] = std::move(res);
    per_seed_mean[static_cast<std::size_t>(s)] = std::move(xbar);
    per_seed_consensus[static_cast<std::size_t>(s)] = std::move(mbar);
  }

  InvariantMeanResult out;
  out.tail_begin = tail_begin;
  out.tail_end = tail_end;
  out.residual.assign(static_cast<std::size_t>(d), 0.0);
  out.particle_mean_tail.assign(static_cast<std::size_t>(d), 0.0);
  out.consensus_tail.assign(static_cast<std::size_t>(d), 0.0);
  out.residual_se.assign(static_cast<std::size_t>(d), 0.0);
  for (std::int64_t s = 0; s < n_seeds; ++s) {
    for (int j = 0; j < d; ++j) {
      out.residual[static_cast<std::size_t>(j)] += per_seed_residual[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] / static_cast<double>(n_seeds);
      out.particle_mean_tail[static_cast<std::size_t>(j)] += per_seed_mean[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] / static_cast<double>(n_seeds);
      out.consensus_tail[static_cast<std::size_t>(j)] += per_seed_consensus[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] / static_cast<double>(n_seeds);
    }
  }
  if (n_seeds > 1) {
    for (int j = 0; j < d; ++j) {
      double var = 0.0;
      for (std::int64_t s = 0; s < n_seeds; ++s) {
        const double dev = per_seed_residual[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] - out.residual[static_cast<std::size_t>(j)];
        var += dev * dev;
      }
      var /= static_cast<double>(n_seeds - 1);
      out.residual_se[static_cast<std::size_t>(j)] = std::sqrt(var / static_cast<double>(n_seeds));
    }
  }
  return out;
}

TrajectorySeries moment_series(const RunRecord& record, std::optional<double> c2_reference) {
  if (record.second_moment_series.empty()) {
    throw InputError("moment_series: the run did not record second moments");
  }
  std::vector<std::vector<double>> values;
  values.reserve(record.second_moment_series.size());
  for (double v : record.second_moment_series) values.push_back({v});
  return TrajectorySeries(record.times, std::move(values), "second_moment", c2_reference);
}

}  // namespace cbo::diagnostics
