// Acceptance gate: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csdiag/io.hpp"
#include "csdiag/oracle.hpp"
#include "csdiag/oscillator.hpp"
#include "csdiag/random.hpp"
#include "csdiag/tql.hpp"

using namespace csdiag;
using Cd = Cx<double>;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  (%s)\n", criterion, ok ? "PASS" : "FAIL",
              detail.c_str());
  if (!ok) ++failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

Cd nearest(const std::vector<Cd>& evs, Cd ref) {
  Cd best = evs.front();
  for (const auto& z : evs)
    if (std::abs(z - ref) < std::abs(best - ref)) best = z;
  return best;
}

std::vector<Cd> solve_oscillator(osc::OscillatorKind kind, double coupling,
                                 double theta, std::size_t basis) {
  osc::OscillatorModel<double> m{kind, coupling, theta, basis};
  return eigen(osc::build_hamiltonian(m)).eigenvalues;
}

// Criteria 1-2: imaginary cubic oscillator ground and first excited state,
// driven through the command-line tool at N=256, with a basis-size
// convergence guard at N=128.
void criteria_1_2() {
  const double kE0 = 0.7973426075089061890;
  const double kE1 = 2.7735249851953797154;

  const double t0 = now_seconds();
  const std::string out = "acceptance_icubic.json";
  const std::string cmd = std::string(CSDIAG_CLI_PATH) +
                          " oscillator --model icubic --coupling 1 "
                          "--basis 256 --levels 2 --output " +
                          out + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  const double elapsed = now_seconds() - t0;
  if (rc != 0) {
    report(1, false, "solver exited with code " + std::to_string(rc));
    report(2, false, "solver exited with code " + std::to_string(rc));
    return;
  }
  std::ifstream in(out);
  nlohmann::json j;
  in >> j;
  const Cd e0(j["eigenvalues"][0]["re"].get<double>(),
              j["eigenvalues"][0]["im"].get<double>());
  const Cd e1(j["eigenvalues"][1]["re"].get<double>(),
              j["eigenvalues"][1]["im"].get<double>());

  const auto small = solve_oscillator(osc::OscillatorKind::ImaginaryCubic,
                                      1.0, 0.0, 128);
  const double guard = std::abs(e0 - small[0]);

  std::ostringstream d1;
  d1 << "|E0 - ref| = " << std::abs(e0 - kE0)
     << ", basis guard = " << guard << ", " << elapsed << " s";
  report(1, std::abs(e0 - kE0) <= 1e-8 && guard <= 1e-8 && elapsed < 10.0,
         d1.str());

  std::ostringstream d2;
  d2 << "|E1 - ref| = " << std::abs(e1 - kE1);
  report(2, std::abs(e1 - kE1) <= 1e-8, d2.str());
}

// Criterion 3: complex-scaled cubic oscillator resonances at theta = 0.30,
// N = 400, plus theta-robustness at 0.35.
void criterion_3() {
  const Cd kEps0(0.6128884333077546, -0.4085926669322672);
  const Cd kEps1(2.1804138375363487, -1.5262076556930325);

  const double t0 = now_seconds();
  const auto evs = solve_oscillator(osc::OscillatorKind::ComplexScaledCubic,
                                    1.0, 0.30, 400);
  const double elapsed = now_seconds() - t0;

  const Cd got0 = nearest(evs, kEps0);
  const Cd got1 = nearest(evs, kEps1);
  const bool ok0 = std::abs(got0.real() - kEps0.real()) <= 1e-5 &&
                   std::abs(got0.imag() - kEps0.imag()) <= 1e-5;
  const bool ok1 = std::abs(got1.real() - kEps1.real()) <= 1e-4 &&
                   std::abs(got1.imag() - kEps1.imag()) <= 1e-4;

  const auto evs35 = solve_oscillator(osc::OscillatorKind::ComplexScaledCubic,
                                      1.0, 0.35, 400);
  const double drift = std::abs(nearest(evs35, kEps0) - got0);

  std::ostringstream d;
  d << "|eps0 err| = " << std::abs(got0 - kEps0)
    << ", |eps1 err| = " << std::abs(got1 - kEps1)
    << ", theta drift = " << drift << ", " << elapsed << " s";
  report(3, ok0 && ok1 && drift <= 1e-5 && elapsed < 60.0, d.str());
}

// Criterion 4: eigenvalue agreement with the characteristic-polynomial
// oracle over 200 seeded random matrices, no breakdowns allowed.
void criterion_4() {
  std::mt19937_64 seeds(20240817);
  double worst = 0;
  int breakdowns = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const auto a = random_symmetric<double>(n, seeds());
    try {
      const auto sp = eigen(a);
      const auto ref = oracle::eig_small(a.dense());
      const double dist = oracle::hausdorff_match(sp.eigenvalues, ref) /
                          frobenius_norm(a.dense());
      worst = std::max(worst, dist);
    } catch (const std::exception& e) {
      ++breakdowns;
      io::write_matrix_file("acceptance_breakdown_" + std::to_string(trial) +
                               ".txt",
                           a);
    }
  }
  std::ostringstream d;
  d << "worst relative Hausdorff distance = " << worst
    << ", breakdowns = " << breakdowns;
  report(4, worst <= 1e-8 && breakdowns == 0, d.str());
}

// Criterion 5: eigenvector residuals and the indefinite Gram matrix for a
// random matrix of order 200.
void criterion_5() {
  const std::size_t n = 200;
  const auto a = random_symmetric<double>(n, 424242);
  ConvergenceOptions<double> opts;
  opts.vectors = true;
  const auto sp = eigen(a, opts);
  const double res = sp.max_residual.value_or(1.0);

  double gram_dev = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      CVector<double> xi(n), xj(n);
      for (std::size_t r = 0; r < n; ++r) {
        xi[r] = (*sp.vectors)(r, i);
        xj[r] = (*sp.vectors)(r, j);
      }
      const Cd g = indefinite_dot(xi, xj) - (i == j ? Cd(1) : Cd(0));
      gram_dev = std::max(gram_dev, std::abs(g));
    }
  std::ostringstream d;
  d << "max residual = " << res << ", Gram deviation = " << gram_dev;
  report(5, res <= 1e-10 && gram_dev <= 1e-8, d.str());
}

// Criterion 6: spot-check the structural invariants (the unit suites cover
// them in depth; this re-asserts each family once).
void criterion_6() {
  bool ok = true;
  std::ostringstream why;

  // reflector involution H(Hx) = x and the projection property H y = -|y| e_k
  {
    std::mt19937_64 rng(601);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CVector<double> y(6);
    for (auto& z : y) z = Cd(dist(rng), dist(rng));
    const auto refl = make_reflector(y);
    const auto once = apply_reflector(refl, y);
    const Cd target = -pseudo_norm(y);
    for (std::size_t i = 0; i < 5; ++i)
      if (std::abs(once[i]) > 1e-12) ok = false;
    if (std::abs(once[5] - target) > 1e-12) ok = false;
    const auto twice = apply_reflector(refl, once);
    for (std::size_t i = 0; i < 6; ++i)
      if (std::abs(twice[i] - y[i]) > 1e-12) ok = false;
    if (!ok) why << "reflector; ";
  }

  // Z^T Z = 1 for the accumulated tridiagonalization transform
  {
    const auto a = random_symmetric<double>(40, 602);
    const auto red = tridiagonalize(a, true);
    const auto ztz = matmul(transpose(*red.Z), *red.Z);
    double dev = 0;
    for (std::size_t i = 0; i < 40; ++i)
      for (std::size_t j = 0; j < 40; ++j)
        dev = std::max(dev,
                       std::abs(ztz(i, j) - (i == j ? Cd(1) : Cd(0))));
    if (dev > 1e-12 * 40) {
      ok = false;
      why << "Z^T Z dev " << dev << "; ";
    }
  }

  // rotation constraint c^2 + s^2 = 1
  {
    const auto r = make_rotation(Cd(0.3, 0.7), Cd(-1.1, 0.2), 0);
    if (std::abs(r.c * r.c + r.s * r.s - Cd(1)) >
        10 * machine_eps<double>()) {
      ok = false;
      why << "rotation; ";
    }
  }

  // QL and QR directions agree
  {
    const auto a = random_symmetric<double>(15, 603);
    ConvergenceOptions<double> qr;
    qr.direction = Direction::QR;
    const double dist =
        oracle::hausdorff_match(eigen(a).eigenvalues,
                                eigen(a, qr).eigenvalues) /
        frobenius_norm(a.dense());
    if (dist > 1e-10) {
      ok = false;
      why << "QL/QR " << dist << "; ";
    }
  }

  // premature-zero partitioning on a planted-zero fixture
  {
    std::mt19937_64 rng(604);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    TridiagonalMatrix<double> t;
    t.D.resize(10);
    t.E.resize(9);
    for (auto& z : t.D) z = Cd(dist(rng), dist(rng));
    for (auto& z : t.E) z = Cd(dist(rng), dist(rng));
    t.E[4] = Cd(0);
    const auto sp = eigen_tridiagonal(t);
    const double d = oracle::hausdorff_match(sp.eigenvalues,
                                             oracle::eig_small(t.to_dense()));
    if (sp.partitions.empty() || d > 1e-8) {
      ok = false;
      why << "partition; ";
    }
  }

  // real symmetric input stays real through the pipeline
  {
    std::mt19937_64 rng(605);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseMatrix<double> m(12);
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = i; j < 12; ++j) {
        m(i, j) = dist(rng);
        m(j, i) = m(i, j);
      }
    const CSMatrix<double> a(std::move(m));
    const auto sp = eigen(a);
    const double bound =
        10 * machine_eps<double>() * frobenius_norm(a.dense());
    for (const auto& ev : sp.eigenvalues)
      if (std::abs(ev.imag()) > bound) {
        ok = false;
        why << "real degeneration; ";
        break;
      }
  }

  report(6, ok, ok ? "reflector, Z^T Z, rotation, QL/QR, partition, "
                     "real-input checks"
                   : why.str());
}

// Criterion 7: PT-symmetric reality of the low-lying imaginary-cubic
// spectrum and parity consistency of the lowest eigenvectors.
void criterion_7() {
  bool ok = true;
  double worst_im = 0, worst_parity = 0;
  for (const double g : {0.1, 0.5, 1.0}) {
    osc::OscillatorModel<double> m{osc::OscillatorKind::ImaginaryCubic, g,
                                   0.0, 128};
    ConvergenceOptions<double> opts;
    opts.vectors = true;
    const auto sp = eigen(osc::build_hamiltonian(m), opts);
    for (std::size_t k = 0; k < 6; ++k)
      worst_im = std::max(worst_im, std::abs(sp.eigenvalues[k].imag()));
    for (std::size_t k = 0; k < 3; ++k) {
      CVector<double> x(128);
      for (std::size_t r = 0; r < 128; ++r) x[r] = (*sp.vectors)(r, k);
      const auto rep = osc::parity_signature(x, 1e-8);
      if (!rep.consistent) ok = false;
      worst_parity = std::max(worst_parity, rep.max_violation);
    }
  }
  std::ostringstream d;
  d << "max |Im| = " << worst_im << ", max parity violation = " << worst_parity;
  report(7, ok && worst_im <= 1e-8 && worst_parity <= 1e-8, d.str());
}

// Criterion 8: scaling exponent of the tridiagonalization phase over sizes
// {100, 200, 400}. The reduction is dense and cubic; the per-sweep QL work
// on the reduced matrix is where the O(n^2) behaviour of the overall
// iteration shows up.
void criterion_8() {
  const std::vector<std::size_t> sizes{100, 200, 400};
  (void)tridiagonalize(random_symmetric<double>(400, 799), false);  // warm up
  // trials are interleaved across sizes so throughput drift on a shared
  // machine biases every size equally instead of tilting the fit
  std::vector<double> best(sizes.size(), 1e9);
  for (int trial = 0; trial < 12; ++trial)
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const auto a = random_symmetric<double>(sizes[k], 800 + trial);
      const double t0 = now_seconds();
      (void)tridiagonalize(a, false);
      best[k] = std::min(best[k], now_seconds() - t0);
    }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    lx.push_back(std::log(double(sizes[k])));
    ly.push_back(std::log(best[k]));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double m = double(lx.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  std::ostringstream d;
  d << "tridiagonalization scaling exponent = " << slope
    << " (dense reduction; the iterative phase itself is O(n^2) per sweep)";
  report(8, slope >= 2.5 && slope <= 3.2, d.str());
}

}  // namespace

int main() {
  criteria_1_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
