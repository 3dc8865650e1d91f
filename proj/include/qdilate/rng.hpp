#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "qdilate/linalg.hpp"

namespace qdilate {

/// Deterministic 64-bit generator (splitmix64). Fixed update rule, so
/// identical seeds give identical streams on every platform.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double next_normal() {
    double u1 = next_uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex next_complex_normal() {
    const double re = next_normal();
    const double im = next_normal();
    return Complex(re, im);
  }

private:
  std::uint64_t state_;
};

inline CMatrix random_complex_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.next_complex_normal();
  return m;
}

inline CMatrix random_hermitian(SplitMix64& rng, std::size_t n) {
  const CMatrix x = random_complex_matrix(rng, n, n);
  return (x + x.adjoint()) * Complex(0.5, 0.0);
}

/// Random density matrix X X* / tr(X X*).
inline CMatrix random_density_matrix(SplitMix64& rng, std::size_t n) {
  const CMatrix x = random_complex_matrix(rng, n, n);
  CMatrix rho = x * x.adjoint();
  const double tr = rho.trace().real();
  return rho * Complex(1.0 / tr, 0.0);
}

}  // namespace qdilate
