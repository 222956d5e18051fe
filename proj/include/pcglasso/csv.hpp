#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "pcglasso/solver.hpp"
#include "pcglasso/sym_matrix.hpp"

namespace pcglasso {

/// Shortest decimal form that round-trips the binary64 value.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double_token(const std::string& file, std::size_t line,
                                 std::string tok) {
  std::size_t b = tok.find_first_not_of(" \t");
  std::size_t e = tok.find_last_not_of(" \t");
  if (b == std::string::npos)
    throw std::runtime_error(file + ":" + std::to_string(line) + ": empty field");
  tok = tok.substr(b, e - b + 1);
  double v;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw std::runtime_error(file + ":" + std::to_string(line) + ": bad number '" + tok + "'");
  return v;
}

}  // namespace detail

/// Headerless CSV, one matrix row per line. Default formatting is the
/// shortest round-trip decimal form, so write-then-read is bit-exact;
/// pretty pads to fixed-width %.6g for eyeballing (lossy).
inline void write_matrix_csv(const std::string& path, const SymMatrix& m,
                             bool pretty = false) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_csv: cannot open " + path);
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      if (j) out << ',';
      if (pretty) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%13.6g", m(i, j));
        out << buf;
      } else {
        out << format_double(m(i, j));
      }
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_matrix_csv: write failed for " + path);
}

/// Reads a headerless numeric CSV and validates it is square and exactly
/// symmetric (zero tolerance). Diagnostics carry file:line positions.
inline SymMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string tok = comma == std::string::npos ? line.substr(pos)
                                                   : line.substr(pos, comma - pos);
      row.push_back(detail::parse_double_token(path, lineno, std::move(tok)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(rows.front().size()) + " columns, got " +
                               std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
  if (rows.size() != rows.front().size())
    throw std::runtime_error(path + ": " + std::to_string(rows.size()) + " rows of " +
                             std::to_string(rows.front().size()) +
                             " columns, matrix is not square");
  Eigen::Index p = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = rows[i][j];
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j + 1; i < p; ++i)
      if (m(i, j) != m(j, i))
        throw std::runtime_error(path + ": entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") differs from its mirror; " +
                                 "input must be exactly symmetric");
  return SymMatrix(std::move(m));
}

inline void write_trace_csv(const std::string& path, const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << "iter,objective,stop_metric,elapsed_s,drs_iters,fbs_iters\n";
  for (const TraceRow& r : trace)
    out << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.stop_metric)
        << ',' << format_double(r.elapsed_s) << ',' << r.drs_iters << ',' << r.fbs_iters
        << '\n';
  if (!out) throw std::runtime_error("write_trace_csv: write failed for " + path);
}

struct BenchRecord {
  std::string setting;
  int p = 0;
  int n = 0;
  double rho = 0.0;
  double c = 1.0;
  std::string method;
  int rep = 0;
  double wall_s = 0.0;
  double objective = 0.0;
  bool converged = false;
  int jobs = 1;
};

inline void write_bench_csv(const std::string& path, const std::vector<BenchRecord>& recs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_bench_csv: cannot open " + path);
  out << "setting,p,n,rho,c,method,rep,wall_s,objective,converged,jobs\n";
  for (const BenchRecord& r : recs)
    out << r.setting << ',' << r.p << ',' << r.n << ',' << format_double(r.rho) << ','
        << format_double(r.c) << ',' << r.method << ',' << r.rep << ','
        << format_double(r.wall_s) << ',' << format_double(r.objective) << ','
        << (r.converged ? 1 : 0) << ',' << r.jobs << '\n';
  if (!out) throw std::runtime_error("write_bench_csv: write failed for " + path);
}

/// Flat key-value file: 'key = value' per line, '#' comments, blank lines
/// ignored. Duplicate keys are rejected; key validation is the caller's job.
inline std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_kv_file: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    if (kv.count(key))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                               key + "'");
    kv[key] = val;
  }
  return kv;
}

}  // namespace pcglasso
