#include "psdc/kernels.hpp"

#include <atomic>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace psdc::kernels {

namespace {
std::atomic<bool> g_parallel{true};

// For each output entry, both paths accumulate over k in ascending order, so
// the serial and parallel kernels round identically.
constexpr int kBlock = 64;

void gemm_block_rows(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                     int ib, int imax) {
  const int n = a.cols();
  const int m = b.cols();
  for (int kb = 0; kb < n; kb += kBlock) {
    const int kmax = kb + kBlock < n ? kb + kBlock : n;
    for (int i = ib; i < imax; ++i) {
      double* crow = c.row(i);
      const double* arow = a.row(i);
      int k = kb;
      // unroll by four to amortize the stores into the output row
      for (; k + 3 < kmax; k += 4) {
        const double a0 = arow[k], a1 = arow[k + 1];
        const double a2 = arow[k + 2], a3 = arow[k + 3];
        const double* b0 = b.row(k);
        const double* b1 = b.row(k + 1);
        const double* b2 = b.row(k + 2);
        const double* b3 = b.row(k + 3);
        for (int j = 0; j < m; ++j)
          crow[j] += (a0 * b0[j] + a1 * b1[j]) + (a2 * b2[j] + a3 * b3[j]);
      }
      for (; k < kmax; ++k) {
        const double aik = arow[k];
        const double* brow = b.row(k);
        for (int j = 0; j < m; ++j) crow[j] += aik * brow[j];
      }
    }
  }
}
}  // namespace

bool parallel_enabled() noexcept { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) noexcept { g_parallel.store(on, std::memory_order_relaxed); }

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw_error(Errc::invalid_argument, "multiply: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols(), 0.0);
  const int rows = a.rows();
  if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
    for (int ib = 0; ib < rows; ib += kBlock)
      gemm_block_rows(a, b, c, ib, ib + kBlock < rows ? ib + kBlock : rows);
  } else {
    gemm_block_rows(a, b, c, 0, rows);
  }
  return c;
}

DenseMatrix multiply_serial(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw_error(Errc::invalid_argument, "multiply: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols(), 0.0);
  const int m = b.cols();
  for (int i = 0; i < a.rows(); ++i) {
    double* crow = c.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* brow = b.row(k);
      for (int j = 0; j < m; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b) {
  return multiply(transpose(a), b);
}

DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b) {
  return multiply(a, transpose(b));
}

DenseMatrix gram_sigma(const DenseMatrix& a, const Signature& sigma) {
  if (sigma.size() != a.rows())
    throw_error(Errc::invalid_argument, "gram_sigma: signature size mismatch");
  DenseMatrix g = multiply(transpose(a), sigma_left(sigma, a));
  // restore the symmetry the product loses to roundoff
  const int n = g.rows();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (g(i, j) + g(j, i));
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

std::vector<double> multiply_vec(const DenseMatrix& a, const std::vector<double>& x) {
  if (int(x.size()) != a.cols())
    throw_error(Errc::invalid_argument, "multiply_vec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double* r = a.row(i);
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

namespace {
enum class Tri { unit, general };

// Multi-RHS triangular solves in row-saxpy form: the recurrence runs along
// the rows of X while each row operation is a contiguous vector update,
// independent across columns -> parallel over column blocks.
void forward_solve(const DenseMatrix& l, DenseMatrix& b, Tri t) {
  const int n = l.rows();
  const int m = b.cols();
  const bool par = parallel_enabled() && m > 32;
#pragma omp parallel if (par)
  {
#ifdef _OPENMP
    const int nt = omp_get_num_threads();
    const int tid = omp_get_thread_num();
#else
    const int nt = 1, tid = 0;
#endif
    const int j0 = int(size_t(m) * tid / nt);
    const int j1 = int(size_t(m) * (tid + 1) / nt);
    for (int i = 0; i < n; ++i) {
      const double* lr = l.row(i);
      double* bi = b.row(i);
      for (int k = 0; k < i; ++k) {
        const double lik = lr[k];
        if (lik == 0.0) continue;
        const double* bk = b.row(k);
        for (int j = j0; j < j1; ++j) bi[j] -= lik * bk[j];
      }
      if (t == Tri::general) {
        const double d = lr[i];
        for (int j = j0; j < j1; ++j) bi[j] /= d;
      }
    }
  }
}

// L^T X = B
void backward_solve(const DenseMatrix& l, DenseMatrix& b, Tri t) {
  const int n = l.rows();
  const int m = b.cols();
  const DenseMatrix lt = transpose(l);  // rows of lt are columns of l
  const bool par = parallel_enabled() && m > 32;
#pragma omp parallel if (par)
  {
#ifdef _OPENMP
    const int nt = omp_get_num_threads();
    const int tid = omp_get_thread_num();
#else
    const int nt = 1, tid = 0;
#endif
    const int j0 = int(size_t(m) * tid / nt);
    const int j1 = int(size_t(m) * (tid + 1) / nt);
    for (int i = n - 1; i >= 0; --i) {
      const double* li = lt.row(i);
      double* bi = b.row(i);
      for (int k = i + 1; k < n; ++k) {
        const double lki = li[k];
        if (lki == 0.0) continue;
        const double* bk = b.row(k);
        for (int j = j0; j < j1; ++j) bi[j] -= lki * bk[j];
      }
      if (t == Tri::general) {
        const double d = li[i];
        for (int j = j0; j < j1; ++j) bi[j] /= d;
      }
    }
  }
}

// X L^T = B, rows of X independent -> parallel over rows of B; the
// recurrence along each row is applied in saxpy form against the rows of
// L^T (columns of L), which are contiguous after one transposition.
void right_backward_solve(const DenseMatrix& l, DenseMatrix& b, Tri t) {
  const int n = l.rows();
  const int m = b.rows();
  const DenseMatrix lt = transpose(l);
  const bool par = parallel_enabled() && m > 1;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < m; ++i) {
    double* br = b.row(i);
    for (int k = 0; k < n; ++k) {
      const double xk = t == Tri::unit ? br[k] : br[k] / lt(k, k);
      br[k] = xk;
      if (xk == 0.0) continue;
      const double* ltk = lt.row(k);
      for (int j = k + 1; j < n; ++j) br[j] -= xk * ltk[j];
    }
  }
}
}  // namespace

void solve_unit_lower_inplace(const DenseMatrix& l, DenseMatrix& b) {
  forward_solve(l, b, Tri::unit);
}
void solve_unit_lower_transposed_inplace(const DenseMatrix& l, DenseMatrix& b) {
  backward_solve(l, b, Tri::unit);
}
void solve_lower_inplace(const DenseMatrix& l, DenseMatrix& b) {
  forward_solve(l, b, Tri::general);
}
void solve_lower_transposed_inplace(const DenseMatrix& l, DenseMatrix& b) {
  backward_solve(l, b, Tri::general);
}
void solve_unit_lower_transposed_right_inplace(const DenseMatrix& l, DenseMatrix& b) {
  right_backward_solve(l, b, Tri::unit);
}
void solve_lower_transposed_right_inplace(const DenseMatrix& l, DenseMatrix& b) {
  right_backward_solve(l, b, Tri::general);
}

}  // namespace psdc::kernels
