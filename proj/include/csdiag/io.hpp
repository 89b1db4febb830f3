#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "csdiag/matrix.hpp"
#include "csdiag/tql.hpp"

// Text matrix format and structured spectrum reports (double precision).
//
// Matrix file grammar: line 1 holds the order n; each of the next n lines
// holds 2n decimal literals, re/im interleaved, row-major.

namespace csdiag::io {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

// 17 significant digits: round-trips IEEE doubles exactly.
inline std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline CSMatrix<double> read_matrix(std::istream& in) {
  long long n_signed = 0;
  if (!(in >> n_signed) || n_signed < 1)
    throw ParseError("matrix file: bad or missing order");
  const std::size_t n = static_cast<std::size_t>(n_signed);
  DenseMatrix<double> a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double re, im;
      if (!(in >> re >> im))
        throw ParseError("matrix file: truncated entry list");
      a(i, j) = Cx<double>(re, im);
      if (!is_finite(a(i, j)))
        throw ParseError("matrix file: non-finite entry");
    }
  double max_abs = 0, max_asym = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      max_abs = std::max(max_abs, std::abs(a(i, j)));
      max_asym = std::max(max_asym, std::abs(a(i, j) - a(j, i)));
    }
  if (max_asym > 1e-12 * max_abs)
    throw ParseError("matrix file: not symmetric within 1e-12 of max|A|");
  return CSMatrix<double>(std::move(a));
}

inline CSMatrix<double> read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  return read_matrix(in);
}

inline void write_matrix(std::ostream& out, const CSMatrix<double>& a) {
  const std::size_t n = a.order();
  out << n << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << format17(a(i, j).real()) << ' ' << format17(a(i, j).imag());
    }
    out << "\n";
  }
}

inline void write_matrix_file(const std::string& path,
                              const CSMatrix<double>& a) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  write_matrix(out, a);
}

inline nlohmann::json report_json(const Spectrum<double>& sp, std::size_t n,
                                  const nlohmann::json& options,
                                  double wall_seconds) {
  nlohmann::json j;
  j["n"] = n;
  auto evs = nlohmann::json::array();
  for (const auto& ev : sp.eigenvalues)
    evs.push_back({{"re", ev.real()}, {"im", ev.imag()}});
  j["eigenvalues"] = std::move(evs);
  j["sweeps"] = sp.sweeps;
  auto parts = nlohmann::json::array();
  for (const auto& p : sp.partitions)
    parts.push_back(nlohmann::json::array({p[0], p[1]}));
  j["partitions"] = std::move(parts);
  if (sp.max_residual)
    j["max_residual"] = *sp.max_residual;
  else
    j["max_residual"] = nullptr;
  j["options"] = options;
  j["wall_seconds"] = wall_seconds;
  if (sp.vectors) {
    auto cols = nlohmann::json::array();
    for (std::size_t c = 0; c < n; ++c) {
      auto col = nlohmann::json::array();
      for (std::size_t r = 0; r < n; ++r)
        col.push_back({{"re", (*sp.vectors)(r, c).real()},
                       {"im", (*sp.vectors)(r, c).imag()}});
      cols.push_back(std::move(col));
    }
    j["eigenvectors"] = std::move(cols);
  }
  return j;
}

inline std::string report_csv(const Spectrum<double>& sp) {
  std::ostringstream out;
  out << "index,re,im,sweeps\n";
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i)
    out << i << ',' << format17(sp.eigenvalues[i].real()) << ','
        << format17(sp.eigenvalues[i].imag()) << ',' << sp.sweeps[i] << "\n";
  return out.str();
}

struct ParsedReport {
  std::vector<Cx<double>> eigenvalues;
  std::optional<DenseMatrix<double>> vectors;
};

inline ParsedReport parse_report(const nlohmann::json& j) {
  ParsedReport rep;
  if (!j.contains("eigenvalues"))
    throw ParseError("report: missing eigenvalues");
  for (const auto& ev : j.at("eigenvalues"))
    rep.eigenvalues.emplace_back(ev.at("re").get<double>(),
                                 ev.at("im").get<double>());
  if (j.contains("eigenvectors") && !j.at("eigenvectors").is_null()) {
    const auto& cols = j.at("eigenvectors");
    const std::size_t n = rep.eigenvalues.size();
    if (cols.size() != n) throw ParseError("report: eigenvector count mismatch");
    DenseMatrix<double> v(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (cols[c].size() != n)
        throw ParseError("report: eigenvector length mismatch");
      for (std::size_t r = 0; r < n; ++r)
        v(r, c) = Cx<double>(cols[c][r].at("re").get<double>(),
                             cols[c][r].at("im").get<double>());
    }
    rep.vectors = std::move(v);
  }
  return rep;
}

}  // namespace csdiag::io
