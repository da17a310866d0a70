#include "cbo/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cbo/errors.hpp"
#include "cbo/reduce.hpp"

namespace cbo {

namespace {

void require_inputs(const Ensemble& ens, double alpha) {
  if (!ens.fresh()) throw InternalError("consensus_point: objective-value cache is stale");
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InputError("consensus_point: alpha must be finite and >= 0");
  }
  const auto f = ens.fvalues();
  for (std::int64_t i = 0; i < ens.n(); ++i) {
    if (!std::isfinite(f[static_cast<std::size_t>(i)])) {
      throw InputError("consensus_point: non-finite objective value at particle " +
                       std::to_string(i));
    }
  }
}

}  // namespace

ConsensusPoint consensus_point(const Ensemble& ens, double alpha) {
  require_inputs(ens, alpha);
  const std::int64_t n = ens.n();
  const int d = ens.dim();
  const auto f = ens.fvalues();
  const auto pos = ens.positions();

  const auto [fmin, argmin] = reduce::det_argmin(n, [&](std::int64_t i) { return f[static_cast<std::size_t>(i)]; });

  // Shifted weights: the argmin particle gets weight exactly 1. Arguments at
  // or below -750 underflow to exactly 0.0, so exp is skipped there; at
  // alpha = 1e15 that is every particle but the argmin.
  auto weight = [&](std::int64_t i) {
    if (alpha == 0.0) return 1.0;
    const double arg = -alpha * (f[static_cast<std::size_t>(i)] - fmin);
    return arg <= -750.0 ? 0.0 : std::exp(arg);
  };

  const std::int64_t nb = reduce::num_blocks(n);
  std::vector<double> part_w(static_cast<std::size_t>(nb));
  std::vector<double> part_w2(static_cast<std::size_t>(nb));
  std::vector<double> part_wx(static_cast<std::size_t>(nb) * d);
  reduce::for_blocks(nb, [&](std::int64_t b) {
    const std::int64_t lo = b * reduce::kBlock;
    const std::int64_t hi = std::min(n, lo + reduce::kBlock);
    reduce::Neumaier sw, sw2;
    std::vector<reduce::Neumaier> swx(static_cast<std::size_t>(d));
    for (std::int64_t i = lo; i < hi; ++i) {
      const double w = weight(i);
      sw.add(w);
      sw2.add(w * w);
      for (int k = 0; k < d; ++k) swx[static_cast<std::size_t>(k)].add(w * pos[i * d + k]);
    }
    part_w[static_cast<std::size_t>(b)] = sw.value();
    part_w2[static_cast<std::size_t>(b)] = sw2.value();
    for (int k = 0; k < d; ++k) part_wx[static_cast<std::size_t>(b) * d + k] = swx[static_cast<std::size_t>(k)].value();
  });

  const double sum_w = reduce::pairwise(part_w);
  const double sum_w2 = reduce::pairwise(part_w2);

  ConsensusPoint cp;
  cp.point.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    std::vector<double> col(static_cast<std::size_t>(nb));
    for (std::int64_t b = 0; b < nb; ++b) col[static_cast<std::size_t>(b)] = part_wx[static_cast<std::size_t>(b) * d + k];
    cp.point[static_cast<std::size_t>(k)] = reduce::pairwise(col) / sum_w;
  }
  cp.log_weight_shift = fmin;
  cp.effective_sample_size = std::clamp(sum_w * sum_w / sum_w2, 1.0, static_cast<double>(n));
  cp.argmin_index = argmin;
  return cp;
}

ConsensusPoint consensus_point_reference(const Ensemble& ens, double alpha) {
  require_inputs(ens, alpha);
  const std::int64_t n = ens.n();
  const int d = ens.dim();
  const auto f = ens.fvalues();

  double fmin = f[0];
  std::int64_t argmin = 0;
  for (std::int64_t i = 1; i < n; ++i) {
    if (f[static_cast<std::size_t>(i)] < fmin) {
      fmin = f[static_cast<std::size_t>(i)];
      argmin = i;
    }
  }

  double sum_w = 0.0;
  double sum_w2 = 0.0;
  std::vector<double> sum_wx(static_cast<std::size_t>(d), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const double w = alpha == 0.0 ? 1.0 : std::exp(-alpha * (f[static_cast<std::size_t>(i)] - fmin));
    sum_w += w;
    sum_w2 += w * w;
    const auto row = ens.row(i);
    for (int k = 0; k < d; ++k) sum_wx[static_cast<std::size_t>(k)] += w * row[static_cast<std::size_t>(k)];
  }

  ConsensusPoint cp;
  cp.point.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) cp.point[static_cast<std::size_t>(k)] = sum_wx[static_cast<std::size_t>(k)] / sum_w;
  cp.log_weight_shift = fmin;
  cp.effective_sample_size = std::clamp(sum_w * sum_w / sum_w2, 1.0, static_cast<double>(n));
  cp.argmin_index = argmin;
  return cp;
}

std::pair<double, double> consensus_stability_gap(const Ensemble& a, const Ensemble& b,
                                                  double alpha) {
  if (a.dim() != 1 || b.dim() != 1) {
    throw InputError("consensus_stability_gap: only 1-dimensional ensembles are supported");
  }
  if (a.n() != b.n()) throw InputError("consensus_stability_gap: ensembles must have equal size");

  const double lhs = std::abs(consensus_point(a, alpha).point[0] - consensus_point(b, alpha).point[0]);

  std::vector<double> xa(a.positions().begin(), a.positions().end());
  std::vector<double> xb(b.positions().begin(), b.positions().end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  double s = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double diff = xa[i] - xb[i];
    s += diff * diff;
  }
  return {lhs, std::sqrt(s / static_cast<double>(xa.size()))};
}

}  // namespace cbo
