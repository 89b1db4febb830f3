#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "csdiag/matrix.hpp"
#include "csdiag/scalar.hpp"

// Anharmonic-oscillator Hamiltonians projected onto the harmonic-oscillator
// eigenbasis, plus parity/wavefunction diagnostics.

namespace csdiag::osc {

enum class OscillatorKind { ImaginaryCubic, ComplexScaledCubic, Quartic };

template <typename Real>
struct OscillatorModel {
  OscillatorKind kind = OscillatorKind::ImaginaryCubic;
  Real coupling = 1;    // G (imaginary cubic) or g (quartic); fixed 1 for
                        // the complex-scaled cubic
  Real theta = 0;       // rotation angle, complex-scaled cubic only
  std::size_t basis_size = 0;
};

inline constexpr double kThetaMax = 3.14159265358979323846 / 5.0;

template <typename Real>
void validate(const OscillatorModel<Real>& m) {
  if (m.basis_size == 0)
    throw std::invalid_argument("oscillator: basis size must be positive");
  switch (m.kind) {
    case OscillatorKind::ImaginaryCubic:
    case OscillatorKind::Quartic:
      if (!(m.coupling > Real(0)))
        throw std::invalid_argument("oscillator: coupling must be > 0");
      break;
    case OscillatorKind::ComplexScaledCubic:
      if (!(m.theta > Real(0) && m.theta < Real(kThetaMax)))
        throw std::invalid_argument("oscillator: theta outside (0, pi/5)");
      break;
  }
}

// Position operator x = (a + a^dagger)/sqrt(2) in the first M states:
// entry (n, n+1) = sqrt((n+1)/2).
template <typename Real>
DenseMatrix<Real> position_matrix(std::size_t m) {
  DenseMatrix<Real> x(m);
  for (std::size_t n = 0; n + 1 < m; ++n) {
    const Real v = std::sqrt(Real(n + 1) / Real(2));
    x(n, n + 1) = Cx<Real>(v);
    x(n + 1, n) = Cx<Real>(v);
  }
  return x;
}

template <typename Real>
DenseMatrix<Real> parity_matrix(std::size_t n) {
  DenseMatrix<Real> p(n);
  for (std::size_t i = 0; i < n; ++i)
    p(i, i) = Cx<Real>(i % 2 == 0 ? Real(1) : Real(-1));
  return p;
}

namespace detail {

// Truncate the leading n x n block of a guarded matrix.
template <typename Real>
DenseMatrix<Real> truncate(const DenseMatrix<Real>& m, std::size_t n) {
  DenseMatrix<Real> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace detail

// N x N Hamiltonian matrix in the harmonic-oscillator basis.  Powers of x
// are formed by products on a guard band of 3 extra states, so the retained
// block is the exactly projected operator.
template <typename Real>
CSMatrix<Real> build_hamiltonian(const OscillatorModel<Real>& model) {
  validate(model);
  const std::size_t n = model.basis_size;
  const std::size_t guarded = n + 3;
  const DenseMatrix<Real> x = position_matrix<Real>(guarded);
  const DenseMatrix<Real> x2 = matmul(x, x);

  DenseMatrix<Real> h(n);
  switch (model.kind) {
    case OscillatorKind::ImaginaryCubic: {
      const DenseMatrix<Real> x3 = detail::truncate(matmul(x2, x), n);
      const Cx<Real> ig(0, model.coupling);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = ig * x3(i, j);
      for (std::size_t i = 0; i < n; ++i) h(i, i) += Real(i) + Real(0.5);
      break;
    }
    case OscillatorKind::Quartic: {
      const DenseMatrix<Real> x4 = detail::truncate(matmul(x2, x2), n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          h(i, j) = Real(model.coupling) * x4(i, j);
      for (std::size_t i = 0; i < n; ++i) h(i, i) += Real(i) + Real(0.5);
      break;
    }
    case OscillatorKind::ComplexScaledCubic: {
      // -1/2 d^2 = diag(n + 1/2) - 1/2 x^2 on the guarded space.
      const DenseMatrix<Real> x3 = matmul(x2, x);
      const Cx<Real> i1(0, 1);
      const Cx<Real> em2 = std::exp(-Real(2) * model.theta * i1);
      const Cx<Real> ep2 = std::exp(Real(2) * model.theta * i1);
      const Cx<Real> ep3 = std::exp(Real(3) * model.theta * i1);
      DenseMatrix<Real> hg(guarded);
      for (std::size_t i = 0; i < guarded; ++i)
        for (std::size_t j = 0; j < guarded; ++j)
          hg(i, j) = (ep2 - em2) * (x2(i, j) / Real(2)) + ep3 * x3(i, j);
      for (std::size_t i = 0; i < guarded; ++i)
        hg(i, i) += em2 * (Real(i) + Real(0.5));
      h = detail::truncate(hg, n);
      break;
    }
  }
  return CSMatrix<Real>(std::move(h));
}

template <typename Real>
struct ParityReport {
  bool n_even_real = false;  // real parts live on even-parity indices
  bool consistent = false;
  Real max_violation = 0;
};

// Checks the parity structure of an eigenvector in the oscillator basis:
// after rotating the global phase so the largest-magnitude coefficient is
// purely real, real parts should occupy only one parity class and
// imaginary parts the other.
template <typename Real>
ParityReport<Real> parity_signature(const CVector<Real>& coeffs, Real tol) {
  ParityReport<Real> rep;
  if (coeffs.empty()) return rep;
  std::size_t imax = 0;
  Real best = -1;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (abs_sq(coeffs[i]) > best) {
      best = abs_sq(coeffs[i]);
      imax = i;
    }
  CVector<Real> c = coeffs;
  if (std::abs(c[imax]) > Real(0)) {
    const Cx<Real> phase = std::abs(c[imax]) / c[imax];
    for (auto& ci : c) ci *= phase;
  }
  Real viol_even_real = 0;  // pattern: Re on even n, Im on odd n
  Real viol_odd_real = 0;   // swapped pattern
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Real re = std::abs(c[i].real());
    const Real im = std::abs(c[i].imag());
    if (i % 2 == 0) {
      viol_even_real = std::max(viol_even_real, im);
      viol_odd_real = std::max(viol_odd_real, re);
    } else {
      viol_even_real = std::max(viol_even_real, re);
      viol_odd_real = std::max(viol_odd_real, im);
    }
  }
  rep.n_even_real = viol_even_real <= viol_odd_real;
  rep.max_violation = std::min(viol_even_real, viol_odd_real);
  rep.consistent = rep.max_violation <= tol;
  return rep;
}

template <typename Real>
struct WavefunctionSample {
  Real x;
  Cx<Real> value;
  Real modulus;
  Real phase;  // in [-pi, pi)
};

// Normalized harmonic-oscillator eigenfunctions phi_0..phi_{n-1}(x) by the
// stable three-term recurrence.
template <typename Real>
std::vector<Real> hermite_basis(Real x, std::size_t n) {
  std::vector<Real> phi(n);
  if (n == 0) return phi;
  const Real pi = Real(3.14159265358979323846L);
  phi[0] = std::pow(pi, Real(-0.25)) * std::exp(-x * x / Real(2));
  if (n > 1) phi[1] = std::sqrt(Real(2)) * x * phi[0];
  for (std::size_t k = 2; k < n; ++k)
    phi[k] = std::sqrt(Real(2) / Real(k)) * x * phi[k - 1] -
             std::sqrt(Real(k - 1) / Real(k)) * phi[k - 2];
  return phi;
}

template <typename Real>
std::vector<WavefunctionSample<Real>> wavefunction_samples(
    const CVector<Real>& coeffs, const std::vector<Real>& xs) {
  std::vector<WavefunctionSample<Real>> out;
  out.reserve(xs.size());
  const Real pi = Real(3.14159265358979323846L);
  for (const Real x : xs) {
    const std::vector<Real> phi = hermite_basis(x, coeffs.size());
    Cx<Real> psi(0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) psi += coeffs[k] * phi[k];
    Real phase = std::arg(psi);
    if (phase >= pi) phase -= Real(2) * pi;
    out.push_back({x, psi, std::abs(psi), phase});
  }
  return out;
}

}  // namespace csdiag::osc
