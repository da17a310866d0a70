#include "cbo/ensemble.hpp"

#include <cmath>

#include "cbo/reduce.hpp"

namespace cbo {

InitSpec InitSpec::uniform_box(std::vector<double> lo, std::vector<double> hi) {
  InitSpec s;
  s.kind = Kind::UniformBox;
  s.a = std::move(lo);
  s.b = std::move(hi);
  return s;
}

InitSpec InitSpec::gaussian(std::vector<double> mean, std::vector<double> cov_diag) {
  InitSpec s;
  s.kind = Kind::Gaussian;
  s.a = std::move(mean);
  s.b = std::move(cov_diag);
  return s;
}

InitSpec InitSpec::dirac(std::vector<double> point) {
  InitSpec s;
  s.kind = Kind::Dirac;
  s.a = std::move(point);
  return s;
}

void InitSpec::validate(int dim) const {
  const auto d = static_cast<std::size_t>(dim);
  switch (kind) {
    case Kind::UniformBox:
      if (a.size() != d) throw ConfigError("init.lo: expected " + std::to_string(dim) + " entries");
      if (b.size() != d) throw ConfigError("init.hi: expected " + std::to_string(dim) + " entries");
      for (std::size_t k = 0; k < d; ++k) {
        if (!(a[k] < b[k])) {
          throw ConfigError("init.lo/hi: lo[" + std::to_string(k) + "] must be < hi[" +
                            std::to_string(k) + "]");
        }
      }
      break;
    case Kind::Gaussian:
      if (a.size() != d) throw ConfigError("init.mean: expected " + std::to_string(dim) + " entries");
      if (b.size() != d) {
        throw ConfigError("init.cov_diag: expected " + std::to_string(dim) + " entries");
      }
      for (std::size_t k = 0; k < d; ++k) {
        if (!(b[k] >= 0.0)) {
          throw ConfigError("init.cov_diag[" + std::to_string(k) + "]: variance must be >= 0");
        }
      }
      break;
    case Kind::Dirac:
      if (a.size() != d) throw ConfigError("init.point: expected " + std::to_string(dim) + " entries");
      break;
  }
  for (double v : a) {
    if (!std::isfinite(v)) throw ConfigError("init: non-finite entry");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw ConfigError("init: non-finite entry");
  }
}

Ensemble::Ensemble(std::int64_t n, int d) : n_(n), d_(d) {
  if (n < 1) throw ConfigError("ensemble: particle count must be >= 1");
  if (d < 1) throw ConfigError("ensemble: dimension must be >= 1");
  pos_.assign(static_cast<std::size_t>(n) * d, 0.0);
  f_.assign(static_cast<std::size_t>(n), 0.0);
}

void Ensemble::set_fvalues(std::vector<double> f) {
  if (f.size() != static_cast<std::size_t>(n_)) {
    throw InputError("set_fvalues: expected " + std::to_string(n_) + " values");
  }
  f_ = std::move(f);
  fresh_ = true;
}

double Ensemble::second_moment() const {
  const int d = d_;
  const double* p = pos_.data();
  const double total = reduce::det_sum(n_, [p, d](std::int64_t i) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const double v = p[i * d + k];
      s += v * v;
    }
    return s;
  });
  return total / static_cast<double>(n_);
}

std::vector<double> Ensemble::mean() const {
  std::vector<double> out(static_cast<std::size_t>(d_), 0.0);
  const int d = d_;
  const double* p = pos_.data();
  reduce::det_sum_vec(n_, d, [p, d](std::int64_t i, int k) { return p[i * d + k]; }, out.data());
  for (double& v : out) v /= static_cast<double>(n_);
  return out;
}

Ensemble init_ensemble(const InitSpec& spec, std::int64_t n, int d, std::uint64_t seed) {
  spec.validate(d);
  Ensemble ens(n, d);
  const RngStream stream(seed, RngStream::kInit);
  auto pos = ens.positions();

  switch (spec.kind) {
    case InitSpec::Kind::UniformBox: {
#pragma omp parallel for schedule(static) if (n >= 2048)
      for (std::int64_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
          const double u = stream.uniform(static_cast<std::uint64_t>(i), 0, static_cast<std::uint32_t>(k));
          pos[i * d + k] = spec.a[static_cast<std::size_t>(k)] +
                           u * (spec.b[static_cast<std::size_t>(k)] - spec.a[static_cast<std::size_t>(k)]);
        }
      }
      break;
    }
    case InitSpec::Kind::Gaussian: {
      std::vector<double> sd(spec.b.size());
      for (std::size_t k = 0; k < sd.size(); ++k) sd[k] = std::sqrt(spec.b[k]);
#pragma omp parallel for schedule(static) if (n >= 2048)
      for (std::int64_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
          const double z = stream.normal(static_cast<std::uint64_t>(i), 0, static_cast<std::uint32_t>(k));
          pos[i * d + k] = spec.a[static_cast<std::size_t>(k)] + sd[static_cast<std::size_t>(k)] * z;
        }
      }
      break;
    }
    case InitSpec::Kind::Dirac: {
#pragma omp parallel for schedule(static) if (n >= 2048)
      for (std::int64_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) pos[i * d + k] = spec.a[static_cast<std::size_t>(k)];
      }
      break;
    }
  }
  ens.mark_stale();
  return ens;
}

}  // namespace cbo
