#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbo/errors.hpp"
#include "cbo/rng.hpp"

namespace cbo {

// Initial law of the particle positions.
struct InitSpec {
  enum class Kind { UniformBox, Gaussian, Dirac };

  Kind kind = Kind::Dirac;
  // UniformBox: a = lo, b = hi. Gaussian: a = mean, b = diagonal covariance.
  // Dirac: a = point, b unused.
  std::vector<double> a;
  std::vector<double> b;

  static InitSpec uniform_box(std::vector<double> lo, std::vector<double> hi);
  static InitSpec gaussian(std::vector<double> mean, std::vector<double> cov_diag);
  static InitSpec dirac(std::vector<double> point);

  // Throws ConfigError naming the offending field.
  void validate(int dim) const;
};

// Particle positions (row-major n x d) with a cached objective value per
// particle. The cache is stale after init or a position update until the
// owner refreshes it against the objective.
class Ensemble {
 public:
  Ensemble(std::int64_t n, int d);

  std::int64_t n() const { return n_; }
  int dim() const { return d_; }

  std::span<double> row(std::int64_t i) { return {pos_.data() + i * d_, static_cast<std::size_t>(d_)}; }
  std::span<const double> row(std::int64_t i) const {
    return {pos_.data() + i * d_, static_cast<std::size_t>(d_)};
  }
  std::span<double> positions() { return pos_; }
  std::span<const double> positions() const { return pos_; }

  std::span<const double> fvalues() const { return f_; }
  std::span<double> fvalues_mut() { return f_; }

  bool fresh() const { return fresh_; }
  void mark_stale() { fresh_ = false; }
  void mark_fresh() { fresh_ = true; }
  void set_fvalues(std::vector<double> f);

  // (1/n) sum |x_i|^2 and the coordinate-wise mean, via deterministic reductions.
  double second_moment() const;
  std::vector<double> mean() const;

 private:
  std::int64_t n_;
  int d_;
  std::vector<double> pos_;
  std::vector<double> f_;
  bool fresh_ = false;
};

// Draws n i.i.d. samples from the requested law. The objective-value cache is
// left stale. Sampling goes through the init domain of the seed's stream, so
// it never collides with the Brownian increments of the run itself.
Ensemble init_ensemble(const InitSpec& spec, std::int64_t n, int d, std::uint64_t seed);

}  // namespace cbo
