#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "csdiag/errors.hpp"
#include "csdiag/matrix.hpp"
#include "csdiag/scalar.hpp"

// Brute-force eigenvalue oracle for small matrices: characteristic
// polynomial by the Faddeev-LeVerrier recurrence, roots by Durand-Kerner
// simultaneous iteration.  Deliberately independent of the Householder/QL
// solver; capped at order 12 where the characteristic polynomial is still
// well conditioned.

namespace csdiag::oracle {

inline constexpr std::size_t kMaxOrder = 12;

// Monic coefficients c_0..c_n of det(lambda 1 - A), ascending powers.
template <typename Real>
std::vector<Cx<Real>> char_poly(const DenseMatrix<Real>& a) {
  const std::size_t n = a.order();
  if (n == 0 || n > kMaxOrder)
    throw std::invalid_argument("char_poly: order outside [1, 12]");
  std::vector<Cx<Real>> c(n + 1);
  c[n] = Cx<Real>(1);
  DenseMatrix<Real> m = a;
  auto trace = [](const DenseMatrix<Real>& x) {
    Cx<Real> t(0);
    for (std::size_t i = 0; i < x.order(); ++i) t += x(i, i);
    return t;
  };
  c[n - 1] = -trace(m);
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    m = matmul(a, m);
    c[n - k] = -trace(m) / Real(k);
  }
  return c;
}

template <typename Real>
Cx<Real> poly_eval(const std::vector<Cx<Real>>& c, const Cx<Real>& z) {
  Cx<Real> acc(0);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

template <typename Real>
Cx<Real> poly_eval_deriv(const std::vector<Cx<Real>>& c, const Cx<Real>& z) {
  Cx<Real> acc(0);
  for (std::size_t k = c.size() - 1; k >= 1; --k)
    acc = acc * z + Real(k) * c[k];
  return acc;
}

// All roots with multiplicity via Durand-Kerner from perturbed-circle
// starting points, polished with two Newton steps per root.
template <typename Real>
std::vector<Cx<Real>> poly_roots(const std::vector<Cx<Real>>& coeffs) {
  if (coeffs.size() < 2) throw std::invalid_argument("poly_roots: degree 0");
  const std::size_t d = coeffs.size() - 1;
  std::vector<Cx<Real>> c = coeffs;
  if (c[d] != Cx<Real>(1))
    for (auto& ck : c) ck /= coeffs[d];

  Real cauchy = 0;
  for (std::size_t k = 0; k < d; ++k) cauchy = std::max(cauchy, std::abs(c[k]));
  const Real radius = Real(1) + cauchy;
  const Real pi = Real(3.14159265358979323846L);
  std::vector<Cx<Real>> z(d);
  for (std::size_t j = 0; j < d; ++j) {
    const Real ang = Real(2) * pi * Real(j) / Real(d) + Real(0.3979);
    const Real r = radius * (Real(1) + Real(1e-3) * Real(j));
    z[j] = Cx<Real>(r * std::cos(ang), r * std::sin(ang));
  }

  // |p(z)| cannot be driven below the rounding noise of Horner evaluation;
  // roots of multiplicity m stall in a cluster of radius ~ eps^(1/m) while
  // their updates stay well above the update threshold.  Treat a root as
  // finished when its residual is at that floor.
  auto at_floor = [&](const Cx<Real>& zj) {
    const Real r = std::abs(zj);
    Real mag = 0;
    for (std::size_t k = c.size(); k-- > 0;) mag = mag * r + std::abs(c[k]);
    return std::abs(poly_eval(c, zj)) <=
           Real(8) * Real(d + 1) * machine_eps<Real>() * mag;
  };

  const int max_iter = 500;
  Real best_update = std::numeric_limits<Real>::infinity();
  int stagnant = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Real max_update = 0;
    Real scale = 1;
    for (const auto& zj : z) scale = std::max(scale, std::abs(zj));
    for (std::size_t j = 0; j < d; ++j) {
      Cx<Real> denom(1);
      for (std::size_t k = 0; k < d; ++k)
        if (k != j) denom *= z[j] - z[k];
      if (denom == Cx<Real>(0)) {
        z[j] += Cx<Real>(Real(1e-8) * scale, Real(1e-8) * scale);
        max_update = scale;
        continue;
      }
      const Cx<Real> delta = poly_eval(c, z[j]) / denom;
      z[j] -= delta;
      max_update = std::max(max_update, std::abs(delta));
    }
    if (max_update < Real(0.9) * best_update) {
      best_update = max_update;
      stagnant = 0;
    } else {
      ++stagnant;
    }
    bool accept = max_update <= Real(1e-14) * scale;
    if (!accept && stagnant >= 50) {
      accept = true;
      for (const auto& zj : z)
        if (!at_floor(zj)) {
          accept = false;
          break;
        }
    }
    if (accept) {
      for (auto& zj : z)
        for (int p = 0; p < 2; ++p) {
          const Cx<Real> pv = poly_eval(c, zj);
          const Cx<Real> dp = poly_eval_deriv(c, zj);
          if (std::abs(dp) == Real(0)) break;
          const Cx<Real> cand = zj - pv / dp;
          if (std::abs(poly_eval(c, cand)) >= std::abs(pv)) break;
          zj = cand;
        }
      return z;
    }
  }
  throw NoConvergence(0);
}

template <typename Real>
std::vector<Cx<Real>> eig_small(const DenseMatrix<Real>& a) {
  return poly_roots(char_poly(a));
}

// Greedy nearest-pair matching of two equally sized multisets; returns the
// largest matched distance.
template <typename Real>
Real hausdorff_match(std::vector<Cx<Real>> a, std::vector<Cx<Real>> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hausdorff_match: size mismatch");
  Real worst = 0;
  while (!a.empty()) {
    std::size_t bi = 0, bj = 0;
    Real best = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        const Real dist = std::abs(a[i] - b[j]);
        if (dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
      }
    worst = std::max(worst, best);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst;
}

}  // namespace csdiag::oracle
