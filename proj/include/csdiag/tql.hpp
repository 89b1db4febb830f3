#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "csdiag/errors.hpp"
#include "csdiag/indefinite.hpp"
#include "csdiag/matrix.hpp"
#include "csdiag/scalar.hpp"
#include "csdiag/tridiag.hpp"

namespace csdiag {

enum class Direction { QL, QR };

template <typename Real>
struct ConvergenceOptions {
  Real eps_conv = machine_eps<Real>();  // |E_i| <= eps_conv (|D_i| + |D_i+1|)
  int max_sweeps = 50;                  // per eigenvalue
  Direction direction = Direction::QL;
  bool perturbed_shift_retry = false;  // retry sweeps with sigma(1 + 1e-8)
  bool vectors = false;
};

// Plane rotation acting on coordinates (pivot, pivot+1); c^2 + s^2 = 1.
template <typename Real>
struct Rotation {
  Cx<Real> c;
  Cx<Real> s;
  std::size_t pivot = 0;
};

// Rotation with c = a/r, s = b/r, r = sqrt(a^2 + b^2).  Throws when the
// radicand is isotropic relative to the Euclidean magnitudes of a and b.
// The radicand r is exposed because the sweep reuses it as the rotated
// codiagonal entry.
template <typename Real>
Rotation<Real> make_rotation(const Cx<Real>& a, const Cx<Real>& b,
                             std::size_t pivot, Cx<Real>* radicand_root = nullptr,
                             Real iso_tol = iso_threshold<Real>()) {
  const Cx<Real> rad = a * a + b * b;
  if (std::abs(rad) <= iso_tol * (abs_sq(a) + abs_sq(b)))
    throw RotationBreakdown(pivot);
  const Cx<Real> r = pseudo_sqrt(rad);
  if (radicand_root) *radicand_root = r;
  return Rotation<Real>{a / r, b / r, pivot};
}

// Wilkinson shift: eigenvalue of [[D1,E1],[E1,D2]] closest to D1 in
// complex modulus; "+" principal branch on an exact tie.
template <typename Real>
Cx<Real> wilkinson_shift(const Cx<Real>& d1, const Cx<Real>& d2,
                         const Cx<Real>& e1) {
  const Cx<Real> mid = (d2 + d1) / Real(2);
  const Cx<Real> half = (d2 - d1) / Real(2);
  const Cx<Real> root = pseudo_sqrt(half * half + e1 * e1);
  const Cx<Real> plus = mid + root;
  const Cx<Real> minus = mid - root;
  return std::abs(minus - d1) < std::abs(plus - d1) ? minus : plus;
}

// The corner Jacobi rotation of an implicitly shifted sweep.
template <typename Real>
Rotation<Real> initial_rotation(const Cx<Real>& dn, const Cx<Real>& en1,
                                const Cx<Real>& sigma, std::size_t pivot = 0,
                                Real iso_tol = iso_threshold<Real>()) {
  return make_rotation(dn - sigma, en1, pivot,
                       static_cast<Cx<Real>*>(nullptr), iso_tol);
}

template <typename Real>
struct SweepState {
  std::vector<Cx<Real>> D;
  std::vector<Cx<Real>> E;
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive; active block is [lo, hi]
  Cx<Real> shift{};
  Cx<Real> bulge{};
  std::vector<int> sweeps;  // per eigenvalue index
  std::vector<std::array<std::size_t, 2>> partition_events;

  static SweepState from(const TridiagonalMatrix<Real>& t) {
    SweepState s;
    s.D = t.D;
    s.E = t.E;
    s.hi = t.order() ? t.order() - 1 : 0;
    s.sweeps.assign(t.order(), 0);
    return s;
  }
};

namespace detail {

// Symmetric 2x2 similarity update at pivot k:
//   [D_k E_k; E_k D_k+1] <- R^T [..] R,  R = [c s; -s c].
template <typename Real>
void apply_pivot(SweepState<Real>& st, const Rotation<Real>& rot) {
  const std::size_t k = rot.pivot;
  const Cx<Real> c = rot.c, s = rot.s;
  const Cx<Real> a = st.D[k], b = st.D[k + 1], e = st.E[k];
  st.D[k] = c * c * a - Real(2) * c * s * e + s * s * b;
  st.D[k + 1] = s * s * a + Real(2) * c * s * e + c * c * b;
  st.E[k] = c * s * (a - b) + (c * c - s * s) * e;
}

template <typename Real>
void rotate_columns(DenseMatrix<Real>& z, const Rotation<Real>& rot) {
  const std::size_t n = z.order();
  const std::size_t k = rot.pivot;
  for (std::size_t i = 0; i < n; ++i) {
    const Cx<Real> zk = z(i, k), zk1 = z(i, k + 1);
    z(i, k) = rot.c * zk - rot.s * zk1;
    z(i, k + 1) = rot.s * zk + rot.c * zk1;
  }
}

}  // namespace detail

// One implicitly shifted similarity pass on the active block [lo, hi].
// QL: shift from the top-left 2x2, corner rotation at the bottom right,
// bulge chased upward.  QR is the mirror image.  Equivalent to
// T' = Q^T (T - sigma 1) Q + sigma 1 with Q^T Q = 1.
template <typename Real>
void ql_sweep(SweepState<Real>& st, DenseMatrix<Real>* accumulate = nullptr,
              Direction dir = Direction::QL,
              const Cx<Real>& shift_scale = Cx<Real>(1),
              Real iso_tol = iso_threshold<Real>()) {
  const std::size_t lo = st.lo, hi = st.hi;
  if (hi <= lo) return;  // size-1 blocks are converged by definition
  auto& D = st.D;
  auto& E = st.E;
  Cx<Real> f{};  // transient bulge

  if (dir == Direction::QL) {
    st.shift = wilkinson_shift(D[lo], D[lo + 1], E[lo]) * shift_scale;
    for (std::size_t k = hi; k-- > lo;) {
      Rotation<Real> rot;
      if (k == hi - 1) {
        rot = initial_rotation(D[hi], E[hi - 1], st.shift, k, iso_tol);
      } else {
        Cx<Real> r;
        rot = make_rotation(E[k + 1], f, k, &r, iso_tol);
        E[k + 1] = r;
      }
      detail::apply_pivot(st, rot);
      if (k > lo) {
        f = rot.s * E[k - 1];
        E[k - 1] = rot.c * E[k - 1];
      }
      if (accumulate) detail::rotate_columns(*accumulate, rot);
    }
  } else {
    st.shift = wilkinson_shift(D[hi], D[hi - 1], E[hi - 1]) * shift_scale;
    for (std::size_t k = lo; k < hi; ++k) {
      Rotation<Real> rot;
      if (k == lo) {
        // mirror image of the QL corner rotation: the sweep runs on the
        // index-reversed block, which flips the sign of s
        rot = initial_rotation(D[lo], E[lo], st.shift, k, iso_tol);
        rot.s = -rot.s;
      } else {
        Cx<Real> r;
        rot = make_rotation(E[k - 1], -f, k, &r, iso_tol);
        E[k - 1] = r;
      }
      detail::apply_pivot(st, rot);
      if (k + 1 < hi) {
        f = -rot.s * E[k + 1];
        E[k + 1] = rot.c * E[k + 1];
      }
      if (accumulate) detail::rotate_columns(*accumulate, rot);
    }
  }
  st.bulge = Cx<Real>(0);
}

// Maximal index ranges whose interior codiagonal entries are all above the
// deflation threshold.
template <typename Real>
std::vector<std::array<std::size_t, 2>> partition_scan(
    const std::vector<Cx<Real>>& D, const std::vector<Cx<Real>>& E, Real tol) {
  std::vector<std::array<std::size_t, 2>> blocks;
  const std::size_t n = D.size();
  std::size_t lo = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(E[i]) <= tol * (std::abs(D[i]) + std::abs(D[i + 1]))) {
      blocks.push_back({lo, i});
      lo = i + 1;
    }
  }
  if (n > 0) blocks.push_back({lo, n - 1});
  return blocks;
}

template <typename Real>
struct Spectrum {
  std::vector<Cx<Real>> eigenvalues;
  std::optional<DenseMatrix<Real>> vectors;  // column j pairs with value j
  std::vector<int> sweeps;
  std::vector<std::array<std::size_t, 2>> partitions;
  long total_sweeps = 0;
  std::optional<Real> max_residual;
  std::vector<bool> quasi_null;
};

namespace detail {

template <typename Real>
bool codiag_negligible(const std::vector<Cx<Real>>& D,
                       const std::vector<Cx<Real>>& E, std::size_t i,
                       Real eps_conv) {
  return std::abs(E[i]) <= eps_conv * (std::abs(D[i]) + std::abs(D[i + 1]));
}

template <typename Real>
void run_sweep_with_retries(SweepState<Real>& st, DenseMatrix<Real>* accum,
                            const ConvergenceOptions<Real>& opts,
                            Real iso_tol) {
  if (!opts.perturbed_shift_retry) {
    ql_sweep(st, accum, opts.direction, Cx<Real>(1), iso_tol);
    return;
  }
  const auto d_snap = st.D;
  const auto e_snap = st.E;
  std::optional<DenseMatrix<Real>> z_snap;
  if (accum) z_snap = *accum;
  Cx<Real> scale(1);
  for (int attempt = 0;; ++attempt) {
    try {
      ql_sweep(st, accum, opts.direction, scale, iso_tol);
      return;
    } catch (const RotationBreakdown&) {
      if (attempt >= 3) throw;
      st.D = d_snap;
      st.E = e_snap;
      if (accum) *accum = *z_snap;
      scale *= Cx<Real>(Real(1) + Real(1e-8));
    }
  }
}

// Sort eigenvalues by (re, im) ascending, permuting vector columns along.
template <typename Real>
void sort_spectrum(Spectrum<Real>& sp) {
  const std::size_t n = sp.eigenvalues.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t(0));
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = sp.eigenvalues[a];
    const auto& y = sp.eigenvalues[b];
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  std::vector<Cx<Real>> ev(n);
  std::vector<int> sw(n);
  for (std::size_t j = 0; j < n; ++j) {
    ev[j] = sp.eigenvalues[idx[j]];
    sw[j] = sp.sweeps[idx[j]];
  }
  sp.eigenvalues = std::move(ev);
  sp.sweeps = std::move(sw);
  if (sp.vectors) {
    DenseMatrix<Real> v(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) v(i, j) = (*sp.vectors)(i, idx[j]);
    sp.vectors = std::move(v);
  }
}

}  // namespace detail

namespace detail {

template <typename Real>
Spectrum<Real> eigen_tridiagonal_impl(const TridiagonalMatrix<Real>& t,
                                      const ConvergenceOptions<Real>& opts,
                                      DenseMatrix<Real>* accumulate,
                                      Real iso_tol) {
  const std::size_t n = t.order();
  SweepState<Real> st = SweepState<Real>::from(t);
  std::vector<bool> boundary_seen(n > 0 ? n - 1 : 0, false);

  auto negligible = [&](std::size_t i) {
    return detail::codiag_negligible(st.D, st.E, i, opts.eps_conv);
  };
  auto note_partition = [&](std::size_t lo, std::size_t hi) {
    if (hi + 1 < n && !boundary_seen[hi]) {
      boundary_seen[hi] = true;
      st.partition_events.push_back({lo, hi});
    }
  };

  long total = 0;
  if (opts.direction == Direction::QL) {
    std::size_t l = 0;
    while (l < n) {
      std::size_t m = l;
      while (m + 1 < n && !negligible(m)) ++m;
      if (m == l) {
        if (l + 1 < n) st.E[l] = Cx<Real>(0);
        ++l;
        continue;
      }
      note_partition(l, m);
      if (++st.sweeps[l] > opts.max_sweeps) throw NoConvergence(l);
      ++total;
      st.lo = l;
      st.hi = m;
      run_sweep_with_retries(st, accumulate, opts, iso_tol);
    }
  } else {
    std::size_t e = n;  // one past the active bottom index
    while (e > 0) {
      const std::size_t last = e - 1;
      std::size_t m = last;
      while (m > 0 && !negligible(m - 1)) --m;
      if (m == last) {
        if (last > 0) st.E[last - 1] = Cx<Real>(0);
        --e;
        continue;
      }
      note_partition(m, last);
      if (++st.sweeps[last] > opts.max_sweeps) throw NoConvergence(last);
      ++total;
      st.lo = m;
      st.hi = last;
      run_sweep_with_retries(st, accumulate, opts, iso_tol);
    }
  }

  Spectrum<Real> sp;
  sp.eigenvalues = std::move(st.D);
  for (const auto& ev : sp.eigenvalues)
    if (!is_finite(ev)) throw NonFiniteError("eigen: non-finite eigenvalue");
  sp.sweeps = std::move(st.sweeps);
  sp.partitions = std::move(st.partition_events);
  sp.total_sweeps = total;
  if (accumulate) sp.vectors = *accumulate;
  sort_spectrum(sp);
  return sp;
}

template <typename To, typename From>
Spectrum<To> spectrum_cast(const Spectrum<From>& s) {
  Spectrum<To> out;
  out.eigenvalues = vector_cast<To>(s.eigenvalues);
  if (s.vectors) out.vectors = matrix_cast<To>(*s.vectors);
  out.sweeps = s.sweeps;
  out.partitions = s.partitions;
  out.total_sweeps = s.total_sweeps;
  if (s.max_residual) out.max_residual = static_cast<To>(*s.max_residual);
  out.quasi_null = s.quasi_null;
  return out;
}

template <typename To, typename From>
ConvergenceOptions<To> options_cast(const ConvergenceOptions<From>& o) {
  return {static_cast<To>(o.eps_conv), o.max_sweeps, o.direction,
          o.perturbed_shift_retry, o.vectors};
}

}  // namespace detail

// Diagonalize a complex symmetric tridiagonal matrix by iterated implicitly
// shifted QL (or QR) sweeps with deflation and premature-zero partitioning.
// When an accumulator threaded from tridiagonalize is supplied, its columns
// become eigenvectors of the original dense matrix (unnormalized).
// Internally carried one precision level up, then rounded.
template <typename Real>
Spectrum<Real> eigen_tridiagonal(const TridiagonalMatrix<Real>& t,
                                 const ConvergenceOptions<Real>& opts = {},
                                 DenseMatrix<Real>* accumulate = nullptr) {
  using W = work_real_t<Real>;
  if constexpr (std::is_same_v<W, Real>) {
    return detail::eigen_tridiagonal_impl(t, opts, accumulate,
                                          iso_threshold<Real>());
  } else {
    const TridiagonalMatrix<W> tw = tridiagonal_cast<W>(t);
    const ConvergenceOptions<W> ow = detail::options_cast<W>(opts);
    std::optional<DenseMatrix<W>> zw;
    if (accumulate) zw = matrix_cast<W>(*accumulate);
    const auto spw = detail::eigen_tridiagonal_impl(
        tw, ow, zw ? &*zw : nullptr, static_cast<W>(iso_threshold<Real>()));
    if (accumulate) *accumulate = matrix_cast<Real>(*zw);
    return detail::spectrum_cast<Real>(spw);
  }
}

namespace detail {

// Scale each column to <x,x>_* = 1 when the bilinear self-product is not
// quasi-null, else to unit Euclidean norm; then fix the sign/phase so the
// largest-magnitude entry has argument in (-pi/2, pi/2].
template <typename Real>
void normalize_vectors(Spectrum<Real>& sp) {
  if (!sp.vectors) return;
  DenseMatrix<Real>& z = *sp.vectors;
  const std::size_t n = z.order();
  sp.quasi_null.assign(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    CVector<Real> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = z(i, j);
    const Cx<Real> g = indefinite_dot(x, x);
    const Real eu = euclidean_norm_sq(x);
    bool full_phase_freedom = false;
    if (std::abs(g) > Real(1e-6) * eu) {
      const Cx<Real> root = pseudo_sqrt(g);
      for (auto& xi : x) xi /= root;
    } else {
      sp.quasi_null[j] = true;
      full_phase_freedom = true;
      const Real root = std::sqrt(eu);
      for (auto& xi : x) xi /= root;
    }
    std::size_t imax = 0;
    Real best = -1;
    for (std::size_t i = 0; i < n; ++i)
      if (abs_sq(x[i]) > best) {
        best = abs_sq(x[i]);
        imax = i;
      }
    const Cx<Real> zmax = x[imax];
    if (full_phase_freedom) {
      if (std::abs(zmax) > Real(0)) {
        const Cx<Real> phase = std::abs(zmax) / zmax;
        for (auto& xi : x) xi *= phase;
      }
    } else if (zmax.real() < Real(0) ||
               (zmax.real() == Real(0) && zmax.imag() < Real(0))) {
      for (auto& xi : x) xi = -xi;
    }
    for (std::size_t i = 0; i < n; ++i) z(i, j) = x[i];
  }
}

template <typename Real>
struct LUFactors {
  DenseMatrix<Real> lu;
  std::vector<std::size_t> piv;
};

template <typename Real>
LUFactors<Real> lu_factor(DenseMatrix<Real> m, Real pivot_floor) {
  const std::size_t n = m.order();
  std::vector<std::size_t> piv(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs_sq(m(i, k)) > abs_sq(m(p, k))) p = i;
    piv[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
    if (std::abs(m(k, k)) < pivot_floor) m(k, k) = Cx<Real>(pivot_floor);
    for (std::size_t i = k + 1; i < n; ++i) {
      m(i, k) /= m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= m(i, k) * m(k, j);
    }
  }
  return {std::move(m), std::move(piv)};
}

template <typename Real>
CVector<Real> lu_solve(const LUFactors<Real>& f, CVector<Real> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k)
    if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) b[i] -= f.lu(i, j) * b[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) b[i] -= f.lu(i, j) * b[j];
    b[i] /= f.lu(i, i);
  }
  return b;
}

// Inverse-iteration cleanup for eigenvectors whose residual betrays an
// ill-conditioned accumulated transform (the reduction amplifies rounding
// through near-isotropic reflectors on some structured matrices even though
// the eigenvalues stay accurate).  A - lambda*1 is factored with partial
// pivoting, vanishing pivots padded to eps*||A|| as usual for inverse
// iteration; a refined column is kept only if its residual improves.
template <typename Real>
void refine_vectors(const CSMatrix<Real>& a, Spectrum<Real>& sp,
                    Real rel_tol) {
  if (!sp.vectors) return;
  const std::size_t n = a.order();
  const Real na = frobenius_norm(a.dense());
  if (na == Real(0)) return;
  auto residual = [&](const CVector<Real>& x, const Cx<Real>& lam) {
    const CVector<Real> ax = matvec(a.dense(), x);
    Real acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += abs_sq(ax[i] - lam * x[i]);
    return std::sqrt(acc);
  };
  for (std::size_t j = 0; j < n; ++j) {
    CVector<Real> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (*sp.vectors)(i, j);
    const Real xs = std::sqrt(euclidean_norm_sq(x));
    if (xs == Real(0)) continue;
    for (auto& xi : x) xi /= xs;
    Real best = residual(x, sp.eigenvalues[j]);
    if (best <= rel_tol * na) continue;
    DenseMatrix<Real> m = a.dense();
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= sp.eigenvalues[j];
    const auto f = lu_factor(std::move(m), machine_eps<Real>() * na);
    bool changed = false;
    for (int it = 0; it < 3; ++it) {
      CVector<Real> y = lu_solve(f, x);
      const Real ys = std::sqrt(euclidean_norm_sq(y));
      if (!(ys > Real(0)) || !std::isfinite(static_cast<double>(ys))) break;
      for (auto& yi : y) yi /= ys;
      const Real r = residual(y, sp.eigenvalues[j]);
      if (r >= best) break;
      best = r;
      x = std::move(y);
      changed = true;
    }
    if (!changed) continue;
    for (std::size_t i = 0; i < n; ++i) (*sp.vectors)(i, j) = x[i];
    // the bilinear Rayleigh quotient is stationary at eigenvectors, so the
    // refined vector also repairs the eigenvalue the amplified reduction
    // perturbed; keep it only when the residual agrees
    const Cx<Real> g = indefinite_dot(x, x);
    if (std::abs(g) > Real(1e-6) * euclidean_norm_sq(x)) {
      const CVector<Real> ax = matvec(a.dense(), x);
      Cx<Real> xax(0);
      for (std::size_t i = 0; i < n; ++i) xax += x[i] * ax[i];
      const Cx<Real> lam = xax / g;
      if (residual(x, lam) <= best) sp.eigenvalues[j] = lam;
    }
  }
}

}  // namespace detail

// Full pipeline: tridiagonalize, then QL/QR iteration; eigenvectors of the
// original dense matrix when requested.  The whole pipeline runs in the
// working precision and only the final spectrum is rounded.
template <typename Real>
Spectrum<Real> eigen(const CSMatrix<Real>& a,
                     const ConvergenceOptions<Real>& opts = {}) {
  using W = work_real_t<Real>;
  const CSMatrix<W> aw(matrix_cast<W>(a.dense()));
  const ConvergenceOptions<W> ow = detail::options_cast<W>(opts);
  TridiagResult<W> red = detail::tridiagonalize_impl(
      aw, opts.vectors, static_cast<W>(machine_eps<Real>()));
  Spectrum<W> sp = detail::eigen_tridiagonal_impl(
      red.T, ow, red.Z ? &*red.Z : nullptr,
      static_cast<W>(iso_threshold<Real>()));
  if (sp.vectors) {
    detail::refine_vectors(aw, sp,
                           W(1e3) * static_cast<W>(machine_eps<Real>()));
    detail::sort_spectrum(sp);
    detail::normalize_vectors(sp);
    const std::size_t n = aw.order();
    const W na = frobenius_norm(aw.dense());
    W worst = 0;
    for (std::size_t j = 0; j < n; ++j) {
      CVector<W> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = (*sp.vectors)(i, j);
      const CVector<W> ax = matvec(aw.dense(), x);
      W acc = 0;
      for (std::size_t i = 0; i < n; ++i)
        acc += abs_sq(ax[i] - sp.eigenvalues[j] * x[i]);
      const W res = std::sqrt(acc) / (na > W(0) ? na : W(1));
      worst = std::max(worst, res);
    }
    sp.max_residual = worst;
  }
  return detail::spectrum_cast<Real>(sp);
}

}  // namespace csdiag
