#pragma once

#include <cstdint>
#include <random>

namespace wrckit {

// Identifies a reproducible random stream. Child streams are derived by
// hashing (stream, tag), so estimators can hand independent streams to
// workers without sharing engine state.
struct RngHandle {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngHandle child(std::uint64_t tag) const;
  friend bool operator==(const RngHandle&, const RngHandle&) = default;
};

std::uint64_t mix64(std::uint64_t x);

// Engine plus distributions. The engine is std::mt19937_64 (fully specified by
// the standard); the distributions are written out here because the std ones
// are implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(const RngHandle& handle);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0,1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via the Marsaglia polar method.
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wrckit
