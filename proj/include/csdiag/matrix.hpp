#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "csdiag/errors.hpp"
#include "csdiag/scalar.hpp"

namespace csdiag {

template <typename Real>
using CVector = std::vector<Cx<Real>>;

// Dense square matrix with complex entries, row-major.
template <typename Real>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Cx<Real>(1);
    return m;
  }

  std::size_t order() const { return n_; }

  Cx<Real>& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Cx<Real>& operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  const std::vector<Cx<Real>>& data() const { return a_; }
  std::vector<Cx<Real>>& data() { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<Cx<Real>> a_;
};

template <typename Real>
DenseMatrix<Real> transpose(const DenseMatrix<Real>& m) {
  const std::size_t n = m.order();
  DenseMatrix<Real> t(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(j, i) = m(i, j);
  return t;
}

template <typename Real>
DenseMatrix<Real> matmul(const DenseMatrix<Real>& a,
                         const DenseMatrix<Real>& b) {
  const std::size_t n = a.order();
  if (b.order() != n) throw std::invalid_argument("matmul: order mismatch");
  DenseMatrix<Real> c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Cx<Real> aik = a(i, k);
      if (aik == Cx<Real>(0)) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <typename Real>
CVector<Real> matvec(const DenseMatrix<Real>& a, const CVector<Real>& x) {
  const std::size_t n = a.order();
  if (x.size() != n) throw std::invalid_argument("matvec: order mismatch");
  CVector<Real> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Cx<Real> acc(0);
    for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

template <typename Real>
Real frobenius_norm(const DenseMatrix<Real>& m) {
  Real acc = 0;
  for (const auto& z : m.data()) acc += abs_sq(z);
  return std::sqrt(acc);
}

template <typename To, typename From>
DenseMatrix<To> matrix_cast(const DenseMatrix<From>& m) {
  const std::size_t n = m.order();
  DenseMatrix<To> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = scalar_cast<To>(m(i, j));
  return out;
}

template <typename To, typename From>
CVector<To> vector_cast(const CVector<From>& v) {
  CVector<To> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = scalar_cast<To>(v[i]);
  return out;
}

// Dense complex symmetric matrix: A = A^T exactly.  Ingested matrices are
// symmetrized as (A + A^T)/2 and checked for finiteness.
template <typename Real>
class CSMatrix {
 public:
  CSMatrix() = default;

  explicit CSMatrix(DenseMatrix<Real> a) : a_(std::move(a)) {
    const std::size_t n = a_.order();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const Cx<Real> s = (a_(i, j) + a_(j, i)) / Real(2);
        if (!is_finite(s)) throw NonFiniteError("CSMatrix: non-finite entry");
        a_(i, j) = s;
        a_(j, i) = s;
      }
  }

  std::size_t order() const { return a_.order(); }
  const Cx<Real>& operator()(std::size_t i, std::size_t j) const {
    return a_(i, j);
  }
  const DenseMatrix<Real>& dense() const { return a_; }

 private:
  DenseMatrix<Real> a_;
};

// Symmetric tridiagonal storage: diagonal D (n entries), codiagonal E (n-1).
template <typename Real>
struct TridiagonalMatrix {
  std::vector<Cx<Real>> D;
  std::vector<Cx<Real>> E;

  std::size_t order() const { return D.size(); }

  DenseMatrix<Real> to_dense() const {
    const std::size_t n = D.size();
    DenseMatrix<Real> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = D[i];
      if (i + 1 < n) {
        m(i, i + 1) = E[i];
        m(i + 1, i) = E[i];
      }
    }
    return m;
  }
};

template <typename To, typename From>
TridiagonalMatrix<To> tridiagonal_cast(const TridiagonalMatrix<From>& t) {
  return TridiagonalMatrix<To>{vector_cast<To>(t.D), vector_cast<To>(t.E)};
}

}  // namespace csdiag
