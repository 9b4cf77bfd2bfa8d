#pragma once

#include <string>
#include <vector>

#include "psdc/matrix.hpp"

namespace psdc::io {

// Matrix Market, dense "array" format (real general), column-major values.
// The reader also accepts "coordinate" files (real general or symmetric).
void write_matrix_market(const std::string& path, const DenseMatrix& a);
DenseMatrix read_matrix_market(const std::string& path);

// Sidecar signature file: first line n, then n lines of +1 / -1.
void write_signature(const std::string& path, const Signature& sigma);
Signature read_signature(const std::string& path);

// One value per line, 17 significant digits (round-trips doubles exactly).
void write_eigenvalues(const std::string& path, const std::vector<double>& v);

struct RunRecord {
  std::string method;
  std::string basis;
  int n = 0;
  double kappa = 0.0;
  uint64_t seed = 0;
  int iterations = 0;
  double backward_error = 0.0;
  double residual = 0.0;
  double orthogonality_defect = 0.0;
  double wall_time_ms = 0.0;
  std::string status = "ok";
};

inline constexpr const char* kReportHeader =
    "method,basis,n,kappa,seed,iterations,backward_error,residual,"
    "orthogonality_defect,wall_time_ms,status";

void write_report_csv(const std::string& path, const std::vector<RunRecord>& rows);

struct AggregateRecord {
  std::string method;
  std::string basis;
  int n = 0;
  double kappa = 0.0;
  int runs = 0;
  int ok = 0;
  double mean_backward_error = 0.0;
  double mean_iterations = 0.0;
  double mean_wall_time_ms = 0.0;
};

inline constexpr const char* kAggregateHeader =
    "method,basis,n,kappa,runs,ok,mean_backward_error,mean_iterations,"
    "mean_wall_time_ms";

void write_aggregate_csv(const std::string& path,
                         const std::vector<AggregateRecord>& rows);

std::vector<AggregateRecord> aggregate_by_kappa(const std::vector<RunRecord>& rows);

}  // namespace psdc::io
