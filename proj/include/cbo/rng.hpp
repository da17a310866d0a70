#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace cbo {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A block is a pure function of (counter, key); there is no generator state,
// which is what makes per-particle, per-step, per-axis draws independent of
// evaluation order and thread count.
namespace philox {

inline constexpr std::uint32_t kMulA = 0xD2511F53u;
inline constexpr std::uint32_t kMulB = 0xCD9E8D57u;
inline constexpr std::uint32_t kKeyA = 0x9E3779B9u;
inline constexpr std::uint32_t kKeyB = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kKeyA;
      key[1] += kKeyB;
    }
    round_once(ctr, key);
  }
  return ctr;
}

}  // namespace philox

// splitmix64; used to derive independent sub-seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

// A keyed, stateless stream of random variates. The variate at
// (seed, domain, particle, step, axis) is a pure function of those values.
// Domains keep initial sampling and Brownian increments from colliding.
class RngStream {
 public:
  enum Domain : std::uint32_t { kDynamics = 0, kInit = 1, kGeneric = 2 };

  explicit RngStream(std::uint64_t master_seed, std::uint32_t domain = kDynamics)
      : seed_(master_seed),
        key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        domain_(domain) {}

  std::uint64_t master_seed() const { return seed_; }
  std::uint32_t domain() const { return domain_; }

  // Standard normal variate. Axes are paired into one Philox block via
  // Box-Muller, so draws stay pure per (particle, step, axis).
  double normal(std::uint64_t particle, std::uint64_t step, std::uint32_t axis) const {
    const std::uint32_t lane = axis >> 1;
    const auto r = philox::block(counter(particle, step, lane), key_);
    const double u1 = 1.0 - to_unit(r[0], r[1]);  // (0, 1], safe for log
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (axis & 1u) ? radius * std::sin(angle) : radius * std::cos(angle);
  }

  // Uniform variate in [0, 1).
  double uniform(std::uint64_t particle, std::uint64_t step, std::uint32_t axis) const {
    const auto r = philox::block(counter(particle, step, axis), key_);
    return to_unit(r[0], r[1]);
  }

 private:
  std::array<std::uint32_t, 4> counter(std::uint64_t particle, std::uint64_t step,
                                       std::uint32_t lane) const {
    return {static_cast<std::uint32_t>(particle), static_cast<std::uint32_t>(particle >> 32),
            static_cast<std::uint32_t>(step), (domain_ << 24) | (lane & 0xFFFFFFu)};
  }

  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed_;
  std::array<std::uint32_t, 2> key_;
  std::uint32_t domain_;
};

// Standard normal increment for (particle, step, axis); pure in all arguments.
inline double normal_increment(const RngStream& stream, std::uint64_t particle,
                               std::uint64_t step, std::uint32_t axis) {
  return stream.normal(particle, step, axis);
}

}  // namespace cbo
