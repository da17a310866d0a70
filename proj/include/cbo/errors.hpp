#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cbo {

// Invalid user-supplied configuration (bad bounds, unknown names, bad sizes).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid data handed to a numeric routine (non-finite values, size mismatch).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal contract, e.g. reading a stale objective-value cache.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system failure; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A particle position became non-finite during integration.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::int64_t step, std::int64_t particle, const std::string& what)
      : std::runtime_error(what), step_(step), particle_(particle) {}

  std::int64_t step() const { return step_; }
  std::int64_t particle() const { return particle_; }

 private:
  std::int64_t step_;
  std::int64_t particle_;
};

}  // namespace cbo
