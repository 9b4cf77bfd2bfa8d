#include "psdc/matrix.hpp"

#include <cmath>
#include <cstring>

namespace psdc {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_positive_definite: return "not_positive_definite";
    case Errc::not_symmetric: return "not_symmetric";
    case Errc::not_pseudosymmetric: return "not_pseudosymmetric";
    case Errc::not_definite: return "not_definite";
    case Errc::singular: return "singular";
    case Errc::no_convergence: return "no_convergence";
    case Errc::breakdown: return "breakdown";
    case Errc::ill_conditioned_projector: return "ill_conditioned_projector";
    case Errc::rank_mismatch: return "rank_mismatch";
    case Errc::split_degenerate: return "split_degenerate";
    case Errc::modulus_out_of_range: return "modulus_out_of_range";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

DenseMatrix::DenseMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(size_t(rows) * cols, fill) {
  if (rows < 1 || cols < 1)
    throw_error(Errc::invalid_argument, "matrix dimensions must be >= 1");
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
  DenseMatrix m(int(d.size()), int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) m(i, i) = d[i];
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Signature::Signature(std::vector<double> signs) : signs_(std::move(signs)) {
  for (double s : signs_)
    if (s != 1.0 && s != -1.0)
      throw_error(Errc::invalid_argument, "signature entries must be +1 or -1");
}

Signature Signature::all_plus(int n) {
  return Signature(std::vector<double>(n, 1.0));
}

Signature Signature::plus_minus(int p, int q) {
  std::vector<double> s(p, 1.0);
  s.insert(s.end(), q, -1.0);
  return Signature(std::move(s));
}

int Signature::count_plus() const noexcept {
  int p = 0;
  for (double s : signs_)
    if (s > 0) ++p;
  return p;
}

bool Signature::uniform() const noexcept {
  if (signs_.empty()) return true;
  for (double s : signs_)
    if (s != signs_[0]) return false;
  return true;
}

namespace {
void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw_error(Errc::invalid_argument, "matrix shape mismatch");
}
}  // namespace

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix c = a;
  const size_t nn = size_t(a.rows()) * a.cols();
  for (size_t i = 0; i < nn; ++i) c.data()[i] += b.data()[i];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix c = a;
  const size_t nn = size_t(a.rows()) * a.cols();
  for (size_t i = 0; i < nn; ++i) c.data()[i] -= b.data()[i];
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  const size_t nn = size_t(a.rows()) * a.cols();
  for (size_t i = 0; i < nn; ++i) c.data()[i] *= s;
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void add_scaled(DenseMatrix& a, double s, const DenseMatrix& b) {
  require_same_shape(a, b);
  const size_t nn = size_t(a.rows()) * a.cols();
  for (size_t i = 0; i < nn; ++i) a.data()[i] += s * b.data()[i];
}

void add_diagonal(DenseMatrix& a, double s) {
  const int n = a.rows() < a.cols() ? a.rows() : a.cols();
  for (int i = 0; i < n; ++i) a(i, i) += s;
}

DenseMatrix sigma_left(const Signature& sigma, const DenseMatrix& a) {
  if (sigma.size() != a.rows())
    throw_error(Errc::invalid_argument, "signature size mismatch");
  DenseMatrix c = a;
  for (int i = 0; i < a.rows(); ++i) {
    if (sigma[i] < 0) {
      double* r = c.row(i);
      for (int j = 0; j < a.cols(); ++j) r[j] = -r[j];
    }
  }
  return c;
}

DenseMatrix sigma_right(const DenseMatrix& a, const Signature& sigma) {
  if (sigma.size() != a.cols())
    throw_error(Errc::invalid_argument, "signature size mismatch");
  DenseMatrix c = a;
  for (int i = 0; i < a.rows(); ++i) {
    double* r = c.row(i);
    for (int j = 0; j < a.cols(); ++j)
      if (sigma[j] < 0) r[j] = -r[j];
  }
  return c;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  const size_t nn = size_t(a.rows()) * a.cols();
  for (size_t i = 0; i < nn; ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

double one_norm(const DenseMatrix& a) {
  std::vector<double> colsum(a.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) colsum[j] += std::fabs(a(i, j));
  double m = 0.0;
  for (double v : colsum) m = std::max(m, v);
  return m;
}

double inf_norm(const DenseMatrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  const size_t nn = size_t(a.rows()) * a.cols();
  for (size_t i = 0; i < nn; ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

double trace(const DenseMatrix& a) {
  const int n = a.rows() < a.cols() ? a.rows() : a.cols();
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += a(i, i);
  return t;
}

double symmetry_defect(const DenseMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      const double d = a(i, j) - a(j, i);
      s += 2.0 * d * d;
    }
  return std::sqrt(s);
}

double pseudosymmetry_defect(const DenseMatrix& a, const Signature& sigma) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      const double d = sigma[i] * a(i, j) - sigma[j] * a(j, i);
      s += 2.0 * d * d;
    }
  return std::sqrt(s);
}

bool is_symmetric(const DenseMatrix& a, double tol) {
  return a.square() && symmetry_defect(a) <= tol;
}

bool is_pseudosymmetric(const DenseMatrix& a, const Signature& sigma, double tol) {
  return a.square() && pseudosymmetry_defect(a, sigma) <= tol;
}

DenseMatrix pseudosymmetrize(const DenseMatrix& a, const Signature& sigma) {
  DenseMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      // average sigma*A with its transpose, mapped back
      const double sij = sigma[i] * a(i, j);
      const double sji = sigma[j] * a(j, i);
      const double m = 0.5 * (sij + sji);
      out(i, j) = sigma[i] * m;
      out(j, i) = sigma[j] * m;
    }
  return out;
}

DenseMatrix symmetrize(const DenseMatrix& a) {
  DenseMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      out(i, j) = m;
      out(j, i) = m;
    }
  return out;
}

void require_finite(const DenseMatrix& a, const char* context) {
  if (!a.all_finite())
    throw_error(Errc::invalid_argument,
                std::string("non-finite entries in ") + context);
}

}  // namespace psdc
