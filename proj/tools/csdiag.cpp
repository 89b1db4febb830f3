// csdiag: eigenvalues and eigenvectors of complex symmetric matrices via
// generalized Householder tridiagonalization and implicitly shifted QL/QR
// iteration.
//
// Exit codes: 0 success, 2 parse/validation error, 3 reduction or rotation
// breakdown, 4 no convergence, 1 verification failure or internal error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csdiag/io.hpp"
#include "csdiag/oscillator.hpp"
#include "csdiag/random.hpp"
#include "csdiag/tql.hpp"

namespace {

using namespace csdiag;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitBreakdown = 3;
constexpr int kExitNoConvergence = 4;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw io::ParseError("cannot open output file: " + path);
  out << text;
}

struct SolveFlags {
  bool vectors = false;
  std::string direction = "ql";
  double tol = machine_eps<double>();
  int max_sweeps = 50;
  std::string format = "json";
  std::string output;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_flag("--vectors", f.vectors, "compute and report eigenvectors");
  cmd->add_option("--direction", f.direction, "sweep direction")
      ->check(CLI::IsMember({"ql", "qr"}));
  cmd->add_option("--tol", f.tol, "deflation tolerance (relative)");
  cmd->add_option("--max-sweeps", f.max_sweeps, "sweep budget per eigenvalue");
  cmd->add_option("--format", f.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", f.output, "output path (default: stdout)");
}

ConvergenceOptions<double> to_options(const SolveFlags& f) {
  ConvergenceOptions<double> opts;
  opts.vectors = f.vectors;
  opts.direction = f.direction == "qr" ? Direction::QR : Direction::QL;
  opts.eps_conv = f.tol;
  opts.max_sweeps = f.max_sweeps;
  return opts;
}

nlohmann::json options_echo(const SolveFlags& f) {
  return {{"direction", f.direction},
          {"tol", f.tol},
          {"max_sweeps", f.max_sweeps},
          {"vectors", f.vectors},
          {"precision", "double"}};
}

void emit_report(const Spectrum<double>& sp, std::size_t n,
                 const SolveFlags& f, double wall) {
  if (f.format == "csv") {
    write_text(f.output, io::report_csv(sp));
  } else {
    write_text(f.output,
               io::report_json(sp, n, options_echo(f), wall).dump(2) + "\n");
  }
}

int cmd_spectrum(const std::string& input, const SolveFlags& flags) {
  const CSMatrix<double> a = io::read_matrix_file(input);
  const double t0 = now_seconds();
  const Spectrum<double> sp = eigen(a, to_options(flags));
  emit_report(sp, a.order(), flags, now_seconds() - t0);
  return kExitOk;
}

osc::OscillatorModel<double> parse_model(const std::string& name,
                                         double coupling, double theta,
                                         std::size_t basis) {
  osc::OscillatorModel<double> m;
  m.coupling = coupling;
  m.theta = theta;
  m.basis_size = basis;
  if (name == "icubic")
    m.kind = osc::OscillatorKind::ImaginaryCubic;
  else if (name == "ccubic")
    m.kind = osc::OscillatorKind::ComplexScaledCubic;
  else
    m.kind = osc::OscillatorKind::Quartic;
  return m;
}

int cmd_oscillator(const std::string& model_name, double coupling,
                   double theta, std::size_t basis, std::size_t levels,
                   const std::string& samples_path, const SolveFlags& flags) {
  const auto model = parse_model(model_name, coupling, theta, basis);
  const CSMatrix<double> h = osc::build_hamiltonian(model);
  SolveFlags f = flags;
  const bool need_vectors = flags.vectors || !samples_path.empty();
  f.vectors = need_vectors;
  const double t0 = now_seconds();
  Spectrum<double> sp = eigen(h, to_options(f));
  const double wall = now_seconds() - t0;

  const std::size_t k = std::min(levels, sp.eigenvalues.size());
  Spectrum<double> head;
  head.eigenvalues.assign(sp.eigenvalues.begin(),
                          sp.eigenvalues.begin() + k);
  head.sweeps.assign(sp.sweeps.begin(), sp.sweeps.begin() + k);
  head.partitions = sp.partitions;
  head.total_sweeps = sp.total_sweeps;
  head.max_residual = sp.max_residual;
  emit_report(head, basis, f, wall);

  if (!samples_path.empty()) {
    std::ostringstream csv;
    csv << "state_index,x,re,im,modulus,phase\n";
    std::vector<double> xs(601);
    for (std::size_t i = 0; i < xs.size(); ++i)
      xs[i] = -6.0 + 12.0 * double(i) / 600.0;
    for (std::size_t state = 0; state < k; ++state) {
      CVector<double> coeffs(basis);
      for (std::size_t r = 0; r < basis; ++r)
        coeffs[r] = (*sp.vectors)(r, state);
      for (const auto& s : osc::wavefunction_samples(coeffs, xs))
        csv << state << ',' << io::format17(s.x) << ','
            << io::format17(s.value.real()) << ','
            << io::format17(s.value.imag()) << ',' << io::format17(s.modulus)
            << ',' << io::format17(s.phase) << "\n";
    }
    write_text(samples_path, csv.str());
  }
  return kExitOk;
}

int cmd_verify(const std::string& matrix_path, const std::string& report_path,
               double tol) {
  const CSMatrix<double> a = io::read_matrix_file(matrix_path);
  std::ifstream in(report_path);
  if (!in) throw io::ParseError("cannot open report file: " + report_path);
  nlohmann::json j;
  in >> j;
  const io::ParsedReport rep = io::parse_report(j);
  if (!rep.vectors) throw io::ParseError("report has no eigenvectors");
  const std::size_t n = a.order();
  if (rep.eigenvalues.size() != n || rep.vectors->order() != n)
    throw io::ParseError("report/matrix shape mismatch");

  const double na = frobenius_norm(a.dense());
  double worst = 0;
  for (std::size_t jcol = 0; jcol < n; ++jcol) {
    CVector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (*rep.vectors)(i, jcol);
    const CVector<double> ax = matvec(a.dense(), x);
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i)
      acc += abs_sq(ax[i] - rep.eigenvalues[jcol] * x[i]);
    worst = std::max(worst, std::sqrt(acc) / (na > 0 ? na : 1.0));
  }
  std::cout << "max_residual " << io::format17(worst) << " tol "
            << io::format17(tol) << "\n";
  return worst <= tol ? kExitOk : kExitVerifyFail;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_bench(const std::vector<std::size_t>& sizes, std::uint64_t seed,
              int trials, const std::string& output) {
  std::ostringstream csv;
  csv << "size,phase,median_seconds\n";
  std::vector<double> log_n, log_tri, log_ql;
  std::ostringstream notes;
  for (const std::size_t n : sizes) {
    std::vector<double> t_tri, t_ql;
    for (int trial = 0; trial < trials; ++trial) {
      const auto a = random_symmetric<double>(
          n, seed + 1000 * static_cast<std::uint64_t>(n) +
                 static_cast<std::uint64_t>(trial));
      if (trial == 0) {
        std::ostringstream hex;
        hex << std::hex << matrix_digest(a);
        notes << "# digest size=" << n << " 0x" << hex.str() << "\n";
      }
      double t0 = now_seconds();
      const auto red = tridiagonalize(a, false);
      t_tri.push_back(now_seconds() - t0);
      t0 = now_seconds();
      (void)eigen_tridiagonal(red.T);
      t_ql.push_back(now_seconds() - t0);
    }
    const double m_tri = median(t_tri), m_ql = median(t_ql);
    csv << n << ",tridiagonalize," << io::format17(m_tri) << "\n";
    csv << n << ",ql," << io::format17(m_ql) << "\n";
    log_n.push_back(std::log(double(n)));
    log_tri.push_back(std::log(std::max(m_tri, 1e-9)));
    log_ql.push_back(std::log(std::max(m_ql, 1e-9)));
  }
  auto slope = [&](const std::vector<double>& y) {
    const std::size_t m = log_n.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      sx += log_n[i];
      sy += y[i];
      sxx += log_n[i] * log_n[i];
      sxy += log_n[i] * y[i];
    }
    const double denom = double(m) * sxx - sx * sx;
    return denom == 0 ? 0.0 : (double(m) * sxy - sx * sy) / denom;
  };
  if (sizes.size() >= 2) {
    notes << "# exponent tridiagonalize " << io::format17(slope(log_tri))
          << "\n";
    notes << "# exponent ql " << io::format17(slope(log_ql)) << "\n";
  }
  write_text(output, csv.str() + notes.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex symmetric eigensolver"};
  app.require_subcommand(1);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum",
                                      "diagonalize a matrix file");
  std::string spectrum_input;
  SolveFlags spectrum_flags;
  spectrum->add_option("input", spectrum_input, "matrix file")->required();
  add_solve_flags(spectrum, spectrum_flags);

  // oscillator
  auto* oscillator = app.add_subcommand(
      "oscillator", "diagonalize an anharmonic-oscillator Hamiltonian");
  std::string model_name = "icubic";
  double coupling = 1.0, theta = 0.30;
  std::size_t basis = 128, levels = 6;
  std::string samples_path;
  SolveFlags osc_flags;
  oscillator->add_option("--model", model_name, "model")
      ->check(CLI::IsMember({"icubic", "ccubic", "quartic"}));
  oscillator->add_option("--coupling", coupling, "coupling G or g");
  oscillator->add_option("--theta", theta, "rotation angle (ccubic)");
  oscillator->add_option("--basis", basis, "basis size N");
  oscillator->add_option("--levels", levels, "number of levels to report");
  oscillator->add_option("--samples", samples_path,
                         "wavefunction sample CSV path");
  add_solve_flags(oscillator, osc_flags);

  // verify
  auto* verify = app.add_subcommand("verify",
                                    "recheck eigenpair residuals of a report");
  std::string verify_matrix, verify_report;
  double verify_tol = 1e-10;
  verify->add_option("matrix", verify_matrix, "matrix file")->required();
  verify->add_option("report", verify_report, "JSON report with eigenvectors")
      ->required();
  verify->add_option("--tol", verify_tol, "residual tolerance");

  // bench
  auto* bench = app.add_subcommand("bench", "timing table for random input");
  std::vector<std::size_t> sizes{100, 200, 400};
  std::uint64_t bench_seed = 1;
  int trials = 3;
  std::string bench_output;
  bench->add_option("--sizes", sizes, "matrix orders")->delimiter(',');
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--trials", trials, "trials per size");
  bench->add_option("--output", bench_output, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return cmd_spectrum(spectrum_input, spectrum_flags);
    if (oscillator->parsed())
      return cmd_oscillator(model_name, coupling, theta, basis, levels,
                            samples_path, osc_flags);
    if (verify->parsed())
      return cmd_verify(verify_matrix, verify_report, verify_tol);
    if (bench->parsed())
      return cmd_bench(sizes, bench_seed, trials, bench_output);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IsotropicBreakdown& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const RotationBreakdown& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitOk;
}
