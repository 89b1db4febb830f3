#pragma once

#include <cstddef>
#include <stdexcept>

#include "csdiag/errors.hpp"
#include "csdiag/matrix.hpp"
#include "csdiag/scalar.hpp"

namespace csdiag {

// Indefinite bilinear inner product: sum x_i * y_i, no conjugation.
template <typename Real>
Cx<Real> indefinite_dot(const CVector<Real>& x, const CVector<Real>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("indefinite_dot: length mismatch");
  Cx<Real> acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

// |v|_* = sqrt(<v,v>_*), principal branch.  Zero is a legal return.
template <typename Real>
Cx<Real> pseudo_norm(const CVector<Real>& v) {
  return pseudo_sqrt(indefinite_dot(v, v));
}

template <typename Real>
Real euclidean_norm_sq(const CVector<Real>& v) {
  Real acc = 0;
  for (const auto& z : v) acc += abs_sq(z);
  return acc;
}

// Householder parameter vector with its cached bilinear self-product.
template <typename Real>
struct Reflector {
  CVector<Real> v;
  Cx<Real> vv;

  std::size_t order() const { return v.size(); }
};

// Relative isotropy threshold used everywhere a bilinear self-product is
// inverted.
template <typename Real>
constexpr Real iso_threshold() {
  return Real(100) * machine_eps<Real>();
}

// v = y + |y|_* e_k, reflecting y onto the last coordinate axis.
template <typename Real>
Reflector<Real> make_reflector(const CVector<Real>& y,
                               Real iso_tol = iso_threshold<Real>()) {
  if (y.empty()) throw std::invalid_argument("make_reflector: empty vector");
  CVector<Real> v = y;
  v.back() += pseudo_norm(y);
  const Cx<Real> vv = indefinite_dot(v, v);
  if (std::abs(vv) <= iso_tol * euclidean_norm_sq(v))
    throw IsotropicBreakdown();
  return Reflector<Real>{std::move(v), vv};
}

// H_v x = x - (2 <v,x>_* / <v,v>_*) v.
template <typename Real>
CVector<Real> apply_reflector(const Reflector<Real>& h, const CVector<Real>& x) {
  if (x.size() != h.v.size())
    throw std::invalid_argument("apply_reflector: length mismatch");
  const Cx<Real> f = Real(2) * indefinite_dot(h.v, x) / h.vv;
  CVector<Real> out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= f * h.v[i];
  return out;
}

// Dense form 1 - (2/<v,v>_*) v (x) v^T; test helper.
template <typename Real>
DenseMatrix<Real> reflector_matrix(const Reflector<Real>& h) {
  const std::size_t k = h.order();
  DenseMatrix<Real> m(k);
  const Cx<Real> f = Real(2) / h.vv;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Cx<Real> outer = (h.v[i] * h.v[j]) * f;
      m(i, j) = (i == j ? Cx<Real>(1) - outer : -outer);
    }
  return m;
}

}  // namespace csdiag
