#include "psdc/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace psdc::io {

namespace {

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
  throw_error(Errc::io_error, path + ": " + what);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix_market(const std::string& path, const DenseMatrix& a) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << " " << a.cols() << "\n";
  // array format stores columns contiguously
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) out << format_double(a(i, j)) << "\n";
  if (!out) io_fail(path, "write failed");
}

DenseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open");
  std::string header;
  if (!std::getline(in, header)) io_fail(path, "empty file");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    io_fail(path, "not a MatrixMarket matrix file");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer")
    io_fail(path, "unsupported field type: " + field);

  std::string line;
  auto next_data_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line()) io_fail(path, "missing size line");

  if (format == "array") {
    if (symmetry != "general") io_fail(path, "array format must be general");
    int rows = 0, cols = 0;
    {
      std::istringstream ls(line);
      if (!(ls >> rows >> cols)) io_fail(path, "malformed size line");
    }
    if (rows < 1 || cols < 1) io_fail(path, "invalid dimensions");
    DenseMatrix a(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) {
        if (!next_data_line()) io_fail(path, "truncated array data");
        std::istringstream ls(line);
        double v;
        if (!(ls >> v)) io_fail(path, "malformed value: " + line);
        a(i, j) = v;
      }
    require_finite(a, path.c_str());
    return a;
  }
  if (format == "coordinate") {
    int rows = 0, cols = 0;
    long nnz = 0;
    {
      std::istringstream ls(line);
      if (!(ls >> rows >> cols >> nnz)) io_fail(path, "malformed size line");
    }
    if (rows < 1 || cols < 1 || nnz < 0) io_fail(path, "invalid dimensions");
    const bool sym = symmetry == "symmetric";
    if (!sym && symmetry != "general")
      io_fail(path, "unsupported symmetry: " + symmetry);
    DenseMatrix a(rows, cols, 0.0);
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line()) io_fail(path, "truncated coordinate data");
      std::istringstream ls(line);
      int i, j;
      double v;
      if (!(ls >> i >> j >> v)) io_fail(path, "malformed entry: " + line);
      if (i < 1 || i > rows || j < 1 || j > cols)
        io_fail(path, "index out of range");
      a(i - 1, j - 1) = v;
      if (sym && i != j) a(j - 1, i - 1) = v;
    }
    require_finite(a, path.c_str());
    return a;
  }
  io_fail(path, "unsupported format: " + format);
}

void write_signature(const std::string& path, const Signature& sigma) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out << sigma.size() << "\n";
  for (int i = 0; i < sigma.size(); ++i)
    out << (sigma[i] > 0 ? "+1" : "-1") << "\n";
  if (!out) io_fail(path, "write failed");
}

Signature read_signature(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open");
  int n = 0;
  if (!(in >> n) || n < 1) io_fail(path, "malformed signature header");
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) {
    std::string tok;
    if (!(in >> tok)) io_fail(path, "truncated signature file");
    if (tok == "+1" || tok == "1")
      s[i] = 1.0;
    else if (tok == "-1")
      s[i] = -1.0;
    else
      io_fail(path, "invalid signature entry: " + tok);
  }
  return Signature(std::move(s));
}

void write_eigenvalues(const std::string& path, const std::vector<double>& v) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  for (double x : v) out << format_double(x) << "\n";
  if (!out) io_fail(path, "write failed");
}

namespace {
void write_record(std::ofstream& out, const RunRecord& r) {
  out << r.method << "," << r.basis << "," << r.n << "," << format_double(r.kappa)
      << "," << r.seed << "," << r.iterations << ","
      << format_double(r.backward_error) << "," << format_double(r.residual)
      << "," << format_double(r.orthogonality_defect) << ","
      << format_double(r.wall_time_ms) << "," << r.status << "\n";
}
}  // namespace

void write_report_csv(const std::string& path, const std::vector<RunRecord>& rows) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out << kReportHeader << "\n";
  for (const RunRecord& r : rows) write_record(out, r);
  if (!out) io_fail(path, "write failed");
}

std::vector<AggregateRecord> aggregate_by_kappa(const std::vector<RunRecord>& rows) {
  std::map<std::tuple<std::string, std::string, int, double>, AggregateRecord> agg;
  for (const RunRecord& r : rows) {
    auto key = std::make_tuple(r.method, r.basis, r.n, r.kappa);
    AggregateRecord& a = agg[key];
    a.method = r.method;
    a.basis = r.basis;
    a.n = r.n;
    a.kappa = r.kappa;
    a.runs += 1;
    if (r.status == "ok") {
      a.ok += 1;
      a.mean_backward_error += r.backward_error;
      a.mean_iterations += r.iterations;
      a.mean_wall_time_ms += r.wall_time_ms;
    }
  }
  std::vector<AggregateRecord> out;
  for (auto& [key, a] : agg) {
    if (a.ok > 0) {
      a.mean_backward_error /= a.ok;
      a.mean_iterations /= a.ok;
      a.mean_wall_time_ms /= a.ok;
    } else {
      a.mean_backward_error = std::nan("");
      a.mean_iterations = std::nan("");
      a.mean_wall_time_ms = std::nan("");
    }
    out.push_back(a);
  }
  return out;
}

void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRecord>& rows) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out << kAggregateHeader << "\n";
  for (const AggregateRecord& r : rows) {
    out << r.method << "," << r.basis << "," << r.n << "," << format_double(r.kappa)
        << "," << r.runs << "," << r.ok << ","
        << format_double(r.mean_backward_error) << ","
        << format_double(r.mean_iterations) << ","
        << format_double(r.mean_wall_time_ms) << "\n";
  }
  if (!out) io_fail(path, "write failed");
}

}  // namespace psdc::io
