#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace cbo::reduce {

// Reductions over particle arrays use fixed-size blocks: Neumaier-compensated
// accumulation inside each block, then a pairwise tree over block partials in
// index order. The shape depends only on n, never on the thread count, so
// parallel results are bit-identical to single-threaded ones. Single-block
// inputs take a plain serial path; entering an OpenMP region from inside an
// already-parallel caller costs more than the whole reduction at small n.
inline constexpr std::int64_t kBlock = 4096;

inline std::int64_t num_blocks(std::int64_t n) { return (n + kBlock - 1) / kBlock; }

template <class Body>
inline void for_blocks(std::int64_t nb, Body&& body) {
  if (nb > 1) {
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) body(b);
  } else {
    for (std::int64_t b = 0; b < nb; ++b) body(b);
  }
}

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

// Combines partials [0, n) pairwise in a fixed tree; destroys the scratch.
inline double pairwise(std::vector<double>& parts) {
  if (parts.empty()) return 0.0;
  for (std::size_t stride = 1; stride < parts.size(); stride *= 2) {
    for (std::size_t i = 0; i + stride < parts.size(); i += 2 * stride) {
      parts[i] += parts[i + stride];
    }
  }
  return parts[0];
}

// Deterministic sum of f(i) for i in [0, n).
template <class F>
double det_sum(std::int64_t n, F&& f) {
  const std::int64_t nb = num_blocks(n);
  std::vector<double> parts(static_cast<std::size_t>(nb), 0.0);
  for_blocks(nb, [&](std::int64_t b) {
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(n, lo + kBlock);
    Neumaier acc;
    for (std::int64_t i = lo; i < hi; ++i) acc.add(f(i));
    parts[static_cast<std::size_t>(b)] = acc.value();
  });
  return pairwise(parts);
}

// Deterministic per-component sums: f(i, k) for k in [0, d), written to out.
template <class F>
void det_sum_vec(std::int64_t n, int d, F&& f, double* out) {
  const std::int64_t nb = num_blocks(n);
  std::vector<double> parts(static_cast<std::size_t>(nb) * d, 0.0);
  for_blocks(nb, [&](std::int64_t b) {
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(n, lo + kBlock);
    std::vector<Neumaier> acc(static_cast<std::size_t>(d));
    for (std::int64_t i = lo; i < hi; ++i) {
      for (int k = 0; k < d; ++k) acc[static_cast<std::size_t>(k)].add(f(i, k));
    }
    for (int k = 0; k < d; ++k) {
      parts[static_cast<std::size_t>(b) * d + k] = acc[static_cast<std::size_t>(k)].value();
    }
  });
  for (int k = 0; k < d; ++k) {
    std::vector<double> col(static_cast<std::size_t>(nb));
    for (std::int64_t b = 0; b < nb; ++b) col[static_cast<std::size_t>(b)] = parts[static_cast<std::size_t>(b) * d + k];
    out[k] = pairwise(col);
  }
}

// Deterministic (min value, first index attaining it). Values must be
// NaN-free; the caller screens its input.
template <class F>
std::pair<double, std::int64_t> det_argmin(std::int64_t n, F&& f) {
  const std::int64_t nb = num_blocks(n);
  std::vector<double> best(static_cast<std::size_t>(nb));
  std::vector<std::int64_t> arg(static_cast<std::size_t>(nb));
  for_blocks(nb, [&](std::int64_t b) {
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(n, lo + kBlock);
    double mv = f(lo);
    std::int64_t mi = lo;
    for (std::int64_t i = lo + 1; i < hi; ++i) {
      const double v = f(i);
      if (v < mv) {
        mv = v;
        mi = i;
      }
    }
    best[static_cast<std::size_t>(b)] = mv;
    arg[static_cast<std::size_t>(b)] = mi;
  });
  double mv = best[0];
  std::int64_t mi = arg[0];
  for (std::int64_t b = 1; b < nb; ++b) {
    if (best[static_cast<std::size_t>(b)] < mv) {
      mv = best[static_cast<std::size_t>(b)];
      mi = arg[static_cast<std::size_t>(b)];
    }
  }
  return {mv, mi};
}

}  // namespace cbo::reduce
