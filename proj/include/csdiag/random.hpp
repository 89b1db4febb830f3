#pragma once

#include <bit>
#include <cstdint>
#include <random>

#include "csdiag/matrix.hpp"

namespace csdiag {

// Reproducible random complex symmetric matrix: independent real and
// imaginary parts uniform in [-1, 1], mirrored across the diagonal.
template <typename Real>
CSMatrix<Real> random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix<Real> a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Cx<Real> z(Real(dist(rng)), Real(dist(rng)));
      a(i, j) = z;
      a(j, i) = z;
    }
  return CSMatrix<Real>(std::move(a));
}

// FNV-1a over the bit patterns of the entries, row-major.
inline std::uint64_t matrix_digest(const CSMatrix<double>& a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 64; b += 8) {
      h ^= (bits >> b) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  const std::size_t n = a.order();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mix(a(i, j).real());
      mix(a(i, j).imag());
    }
  return h;
}

}  // namespace csdiag
