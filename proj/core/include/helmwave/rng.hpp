#pragma once

#include <cstdint>
#include <random>

#include "helmwave/types.hpp"

namespace helmwave {

// splitmix64 finalizer; decorrelates (seed, key) pairs before seeding the engine.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic complex-Gaussian stream keyed by (seed, key).
///
/// Every source of randomness in the solver draws from one of these streams,
/// each with its own key, so results do not depend on execution order.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t key)
      : engine_(mix64(mix64(seed) ^ mix64(key))) {}

  double next_real() { return normal_(engine_); }

  /// Real and imaginary parts independent standard normal.
  Complex next() { return Complex(normal_(engine_), normal_(engine_)); }

  Vector vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = next();
    return v;
  }

  /// Column-major fill; the fill order is part of the determinism contract.
  DenseMatrix matrix(Index rows, Index cols) {
    DenseMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = next();
    return m;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Stream key tags. Subdomain streams add the node uid so sibling bases are
// independent and reproducible regardless of build order.
namespace stream_key {
inline constexpr std::uint64_t kRandomSolution = 0x01;
inline constexpr std::uint64_t kOnedLoad = 0x02;
inline std::uint64_t rsvd(int node_uid) { return 0x100 + static_cast<std::uint64_t>(node_uid); }
}  // namespace stream_key

}  // namespace helmwave
