#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <utility>

#include "csdiag/errors.hpp"
#include "csdiag/indefinite.hpp"
#include "csdiag/matrix.hpp"
#include "csdiag/scalar.hpp"

namespace csdiag {

namespace detail {

// Rank-2 similarity update B' = H_v B H_v restricted to the leading k x k
// block of m.  p = |v|_*^2 / 2, u = Bv/p, q = v.u/(2p), w = u - qv,
// B' = B - v w^T - w v^T.  Only the upper triangle of the block is read
// and written; callers that need the mirror must restore it themselves.
template <typename Real>
void rank2_update(DenseMatrix<Real>& m, const Reflector<Real>& h) {
  const std::size_t k = h.order();
  const Cx<Real> p = h.vv / Real(2);
  CVector<Real> u(k);
  for (std::size_t i = 0; i < k; ++i) {
    Cx<Real> acc = m(i, i) * h.v[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      acc += m(i, j) * h.v[j];
      u[j] += m(i, j) * h.v[i];
    }
    u[i] += acc;
  }
  for (auto& ui : u) ui /= p;
  Cx<Real> q(0);
  for (std::size_t i = 0; i < k; ++i) q += h.v[i] * u[i];
  q /= Real(2) * p;
  CVector<Real> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = u[i] - q * h.v[i];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j)
      m(i, j) -= h.v[i] * w[j] + w[i] * h.v[j];
}

}  // namespace detail

// B' = H_v B H_v via the rank-2 update; H_v is never formed densely.
template <typename Real>
DenseMatrix<Real> householder_step(const DenseMatrix<Real>& b,
                                   const CVector<Real>& v) {
  if (v.size() != b.order())
    throw std::invalid_argument("householder_step: order mismatch");
  const Cx<Real> vv = indefinite_dot(v, v);
  if (std::abs(vv) <= iso_threshold<Real>() * euclidean_norm_sq(v))
    throw IsotropicBreakdown();
  DenseMatrix<Real> out = b;
  detail::rank2_update(out, Reflector<Real>{v, vv});
  for (std::size_t i = 0; i < out.order(); ++i)
    for (std::size_t j = i + 1; j < out.order(); ++j) out(j, i) = out(i, j);
  return out;
}

template <typename Real>
struct TridiagResult {
  TridiagonalMatrix<Real> T;
  std::optional<DenseMatrix<Real>> Z;  // Z^T A Z = T when requested
};

namespace detail {

// Core reduction.  eps_ref is the epsilon of the *interface* precision:
// the reduction may run in a wider working type, but skip and breakdown
// decisions must not change with the internal precision.
template <typename Real>
TridiagResult<Real> tridiagonalize_impl(const CSMatrix<Real>& a,
                                        bool accumulate, Real eps_ref) {
  const std::size_t n = a.order();
  DenseMatrix<Real> m = a.dense();
  TridiagonalMatrix<Real> t;
  t.D.resize(n);
  t.E.resize(n > 0 ? n - 1 : 0);
  std::optional<DenseMatrix<Real>> z;
  if (accumulate) z = DenseMatrix<Real>::identity(n);

  const Real scale = frobenius_norm(m);
  const Real skip_tol = Real(10) * eps_ref * scale;

  for (std::size_t s = n; s >= 3; --s) {
    // y = first s-1 entries of column s-1 (0-based).
    bool on_axis = true;
    for (std::size_t i = 0; i + 2 < s; ++i)
      if (std::abs(m(i, s - 1)) > skip_tol) {
        on_axis = false;
        break;
      }
    if (on_axis) {
      t.E[s - 2] = m(s - 2, s - 1);
      continue;
    }

    CVector<Real> y(s - 1);
    for (std::size_t i = 0; i + 1 < s; ++i) y[i] = m(i, s - 1);
    Reflector<Real> h;
    try {
      h = make_reflector(y, Real(100) * eps_ref);
    } catch (const IsotropicBreakdown&) {
      throw IsotropicBreakdown(s - 1);
    }
    t.E[s - 2] = -pseudo_norm(y);

    detail::rank2_update(m, h);
    for (std::size_t i = 0; i + 2 < s; ++i) {
      m(i, s - 1) = Cx<Real>(0);
      m(s - 1, i) = Cx<Real>(0);
    }
    m(s - 2, s - 1) = t.E[s - 2];
    m(s - 1, s - 2) = t.E[s - 2];

    if (z) {
      // Z <- Z H, where H acts on the leading s-1 coordinates.
      for (std::size_t r = 0; r < n; ++r) {
        Cx<Real> dot(0);
        for (std::size_t j = 0; j + 1 < s; ++j) dot += (*z)(r, j) * h.v[j];
        const Cx<Real> f = Real(2) * dot / h.vv;
        for (std::size_t j = 0; j + 1 < s; ++j) (*z)(r, j) -= f * h.v[j];
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    t.D[i] = m(i, i);
    if (!is_finite(t.D[i]))
      throw NonFiniteError("tridiagonalize: non-finite diagonal");
  }
  if (n >= 2) t.E[0] = m(0, 1);
  for (const auto& e : t.E)
    if (!is_finite(e))
      throw NonFiniteError("tridiagonalize: non-finite codiagonal");
  return TridiagResult<Real>{std::move(t), std::move(z)};
}

}  // namespace detail

// Reduce A to complex symmetric tridiagonal form by n-2 generalized
// Householder similarity transformations.  Step m (m = n-1 .. 2) eliminates
// the first m-1 entries of column m+1 (1-based), producing subdiagonal
// entry -|y_m|_*.  Columns already on the axis are skipped with the entry
// copied straight to the codiagonal.  Internally carried one precision
// level up, then rounded.
template <typename Real>
TridiagResult<Real> tridiagonalize(const CSMatrix<Real>& a,
                                   bool accumulate = false) {
  using W = work_real_t<Real>;
  if constexpr (std::is_same_v<W, Real>) {
    return detail::tridiagonalize_impl(a, accumulate, machine_eps<Real>());
  } else {
    const CSMatrix<W> aw(matrix_cast<W>(a.dense()));
    auto rw = detail::tridiagonalize_impl(
        aw, accumulate, static_cast<W>(machine_eps<Real>()));
    TridiagResult<Real> out{tridiagonal_cast<Real>(rw.T), std::nullopt};
    if (rw.Z) out.Z = matrix_cast<Real>(*rw.Z);
    return out;
  }
}

// || Z^T A Z - T ||_F / ||A||_F
template <typename Real>
Real similarity_residual(const CSMatrix<Real>& a,
                         const TridiagonalMatrix<Real>& t,
                         const DenseMatrix<Real>& z) {
  const std::size_t n = a.order();
  if (t.order() != n || z.order() != n)
    throw std::invalid_argument("similarity_residual: order mismatch");
  DenseMatrix<Real> zt = transpose(z);
  DenseMatrix<Real> lhs = matmul(matmul(zt, a.dense()), z);
  const DenseMatrix<Real> td = t.to_dense();
  Real acc = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      acc += abs_sq(lhs(i, j) - td(i, j));
  const Real na = frobenius_norm(a.dense());
  return na == Real(0) ? std::sqrt(acc) : std::sqrt(acc) / na;
}

}  // namespace csdiag
