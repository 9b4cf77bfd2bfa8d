#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "psdc/error.hpp"

namespace psdc {

// IEEE double unit roundoff.
inline constexpr double kUnitRoundoff = 0x1p-53;

// Dense real matrix, row-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(int i, int j) noexcept { return data_[size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const noexcept { return data_[size_t(i) * cols_ + j]; }

  double* row(int i) noexcept { return data_.data() + size_t(i) * cols_; }
  const double* row(int i) const noexcept { return data_.data() + size_t(i) * cols_; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  static DenseMatrix identity(int n);
  static DenseMatrix diagonal(const std::vector<double>& d);

  bool all_finite() const noexcept;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Diagonal +/-1 matrix stored as a sign vector.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<double> signs);
  static Signature all_plus(int n);
  static Signature plus_minus(int p, int q);  // diag(I_p, -I_q)

  int size() const noexcept { return int(signs_.size()); }
  double operator[](int i) const noexcept { return signs_[i]; }
  const std::vector<double>& signs() const noexcept { return signs_; }

  int count_plus() const noexcept;
  int count_minus() const noexcept { return size() - count_plus(); }

  bool uniform() const noexcept;  // all +1 or all -1

 private:
  std::vector<double> signs_;
};

// Elementwise matrix arithmetic (shapes must match).
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

DenseMatrix transpose(const DenseMatrix& a);

// a += s * b
void add_scaled(DenseMatrix& a, double s, const DenseMatrix& b);
// adds s to each diagonal entry
void add_diagonal(DenseMatrix& a, double s);

// Row/column scaling by a signature: sigma * A and A * sigma.
DenseMatrix sigma_left(const Signature& sigma, const DenseMatrix& a);
DenseMatrix sigma_right(const DenseMatrix& a, const Signature& sigma);

double frobenius_norm(const DenseMatrix& a);
double one_norm(const DenseMatrix& a);   // max absolute column sum
double inf_norm(const DenseMatrix& a);   // max absolute row sum
double max_abs(const DenseMatrix& a);
double trace(const DenseMatrix& a);

// ||A - A^T||_F
double symmetry_defect(const DenseMatrix& a);
// ||sigma*A - (sigma*A)^T||_F
double pseudosymmetry_defect(const DenseMatrix& a, const Signature& sigma);

bool is_symmetric(const DenseMatrix& a, double tol);
bool is_pseudosymmetric(const DenseMatrix& a, const Signature& sigma, double tol);

// Nearest pseudosymmetric matrix (A + sigma A^T sigma)/2; used by the sign
// iterations to strip the roundoff drift each step would otherwise
// accumulate.
DenseMatrix pseudosymmetrize(const DenseMatrix& a, const Signature& sigma);
// (A + A^T)/2
DenseMatrix symmetrize(const DenseMatrix& a);

// Throws invalid_argument on NaN/Inf entries; used at generator and I/O
// boundaries.
void require_finite(const DenseMatrix& a, const char* context);

}  // namespace psdc
