#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cbo/ensemble.hpp"

namespace cbo {

struct ConsensusPoint {
  std::vector<double> point;
  double log_weight_shift = 0.0;        // the subtracted min f
  double effective_sample_size = 1.0;   // (sum w)^2 / sum w^2, in [1, n]
  std::int64_t argmin_index = 0;
};

// Weighted consensus point with weights exp(-alpha (f_i - min_j f_j)). The
// shift makes the largest weight exactly 1, so the denominator never
// underflows even at alpha = 1e15; exact ties at the minimum get equal unit
// weights. Reductions are blocked and deterministic, so the result is
// bit-identical across thread counts.
//
// Throws InternalError on a stale cache and InputError (naming the particle)
// on a non-finite objective value or invalid alpha.
ConsensusPoint consensus_point(const Ensemble& ens, double alpha);

// Straight-loop single-threaded reference with plain accumulation; kept for
// testing the blocked kernel against.
ConsensusPoint consensus_point_reference(const Ensemble& ens, double alpha);

// |m_alpha(A) - m_alpha(B)| together with the exact 1-d Wasserstein-2
// distance between the two empirical laws (sorted coupling). Only d = 1;
// used to estimate an empirical stability constant.
std::pair<double, double> consensus_stability_gap(const Ensemble& a, const Ensemble& b,
                                                  double alpha);

}  // namespace cbo
