#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace csdiag {

template <typename Real>
using Cx = std::complex<Real>;

template <typename Real>
constexpr Real machine_eps() {
  return std::numeric_limits<Real>::epsilon();
}

template <typename Real>
bool is_finite(const Cx<Real>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Principal square root with the branch cut along the negative real axis.
// A negative real radicand maps to +i*sqrt(|radicand|), regardless of the
// sign bit of its (zero) imaginary part.
template <typename Real>
Cx<Real> pseudo_sqrt(const Cx<Real>& z) {
  if (z.imag() == Real(0) && z.real() < Real(0))
    return Cx<Real>(Real(0), std::sqrt(-z.real()));
  return std::sqrt(z);
}

template <typename Real>
Real abs_sq(const Cx<Real>& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

// Internal working precision, one level above the interface precision.
// Complex-orthogonal transforms are not norm preserving: ||v||^2/|<v,v>_*|
// reaches 1e3-1e4 on random input, and that factor multiplies rounding
// error.  Carrying the reduction in a wider type keeps the results correct
// to roughly the interface epsilon.
template <typename Real>
struct work_precision {
  using type = Real;
};
template <>
struct work_precision<float> {
  using type = double;
};
template <>
struct work_precision<double> {
  using type = long double;
};
template <typename Real>
using work_real_t = typename work_precision<Real>::type;

template <typename To, typename From>
Cx<To> scalar_cast(const Cx<From>& z) {
  return Cx<To>(static_cast<To>(z.real()), static_cast<To>(z.imag()));
}

}  // namespace csdiag
