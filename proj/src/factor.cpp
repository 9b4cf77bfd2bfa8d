#include "psdc/factor.hpp"

#include <algorithm>
#include <cmath>

#include "psdc/kernels.hpp"

namespace psdc {

namespace {

void require_symmetric(const DenseMatrix& a, const char* op) {
  if (!a.square())
    throw_error(Errc::invalid_argument, std::string(op) + ": matrix not square");
  const double tol = 10.0 * kUnitRoundoff * frobenius_norm(a);
  if (symmetry_defect(a) > tol)
    throw_error(Errc::not_symmetric, std::string(op) + ": input not symmetric");
}

}  // namespace

DenseMatrix LdlFactorization::d_dense() const {
  const int n = size();
  DenseMatrix dm(n, n);
  for (int i = 0; i < n; ++i) dm(i, i) = d[i];
  for (int i = 0; i + 1 < n; ++i) {
    dm(i + 1, i) = d_sub[i];
    dm(i, i + 1) = d_sub[i];
  }
  return dm;
}

DenseMatrix LdlFactorization::reconstruct() const {
  const int n = size();
  DenseMatrix ld = kernels::multiply(l, d_dense());
  DenseMatrix a0 = kernels::multiply_nt(ld, l);
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(perm[i], perm[j]) = a0(i, j);
  return a;
}

DenseMatrix BlockDiagEig::dense(int n) const {
  DenseMatrix v = DenseMatrix::identity(n);
  for (const Rotation& r : rotations) {
    v(r.i, r.i) = r.c;
    v(r.i, r.i + 1) = r.s;
    v(r.i + 1, r.i) = -r.s;
    v(r.i + 1, r.i + 1) = r.c;
  }
  return v;
}

void apply_block_rotations_right(DenseMatrix& m, const BlockDiagEig& eig) {
  for (const BlockDiagEig::Rotation& r : eig.rotations) {
    for (int row = 0; row < m.rows(); ++row) {
      const double x = m(row, r.i);
      const double y = m(row, r.i + 1);
      m(row, r.i) = r.c * x - r.s * y;
      m(row, r.i + 1) = r.s * x + r.c * y;
    }
  }
}

CholeskyFactor cholesky(const DenseMatrix& a) {
  require_symmetric(a, "cholesky");
  const int n = a.rows();
  const double pivot_floor = kUnitRoundoff * trace(a) / n;
  DenseMatrix l = a;
  const bool par = kernels::parallel_enabled() && n > 64;
  std::vector<double> colk(n);
  for (int k = 0; k < n; ++k) {
    const double piv = l(k, k);
    if (piv <= 0.0 || piv <= pivot_floor)
      throw_error(Errc::not_positive_definite,
                  "cholesky: nonpositive pivot at step " + std::to_string(k));
    const double lkk = std::sqrt(piv);
    l(k, k) = lkk;
    for (int i = k + 1; i < n; ++i) {
      l(i, k) /= lkk;
      colk[i] = l(i, k);
    }
    // trailing update on the lower triangle, row-wise for contiguous access
#pragma omp parallel for schedule(static, 8) if (par)
    for (int i = k + 1; i < n; ++i) {
      const double lik = colk[i];
      double* row = l.row(i);
      for (int j = k + 1; j <= i; ++j) row[j] -= lik * colk[j];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) l(i, j) = 0.0;
  return CholeskyFactor{std::move(l)};
}

LdlFactorization ldl_bunch_kaufman(const DenseMatrix& a, double zero_pivot_tol) {
  require_symmetric(a, "ldl_bunch_kaufman");
  const int n = a.rows();
  // classical pivot threshold
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
  // pivots at or below this magnitude are treated as exact zeros, so that
  // singular inputs (projectors) factor with zero trailing D blocks
  double zero_tol = zero_pivot_tol;
  if (zero_tol < 0.0) {
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i)
      max_diag = std::max(max_diag, std::fabs(a(i, i)));
    if (max_diag == 0.0) max_diag = max_abs(a);
    zero_tol = n * kUnitRoundoff * max_diag;
  }

  DenseMatrix w = a;  // working copy; lower triangle is active
  LdlFactorization f;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  f.l = DenseMatrix::identity(n);
  f.d.assign(n, 0.0);
  f.d_sub.assign(n > 0 ? n - 1 : 0, 0.0);

  const bool par = kernels::parallel_enabled() && n > 64;
  std::vector<double> col1(n), col2(n);  // contiguous copies of pivot columns

  // Symmetric interchange of rows/columns p < q, maintained on the lower
  // triangle of the active block only. Already-computed L columns (< k)
  // swap rows; diagonal unit entries stay in place.
  auto swap_sym = [&](int p, int q, int k) {
    if (p == q) return;
    std::swap(f.perm[p], f.perm[q]);
    for (int j = k; j < p; ++j) std::swap(w(p, j), w(q, j));
    std::swap(w(p, p), w(q, q));
    for (int i = p + 1; i < q; ++i) std::swap(w(i, p), w(q, i));
    for (int i = q + 1; i < n; ++i) std::swap(w(i, p), w(i, q));
    for (int j = 0; j < k; ++j) std::swap(f.l(p, j), f.l(q, j));
  };

  int k = 0;
  while (k < n) {
    // largest off-diagonal magnitude in column k of the active block
    double lam = 0.0;
    int r = k;
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(w(i, k));
      if (v > lam) {
        lam = v;
        r = i;
      }
    }
    const double akk = std::fabs(w(k, k));

    if (std::max(akk, lam) <= zero_tol) {
      // negligible column: zero pivot, unit L column
      f.d[k] = 0.0;
      f.block_starts.push_back(k);
      f.block_sizes.push_back(1);
      ++k;
      continue;
    }

    int pivot_size = 1;
    if (akk < alpha * lam) {
      // inspect column r to decide between staying on (k,k) and pivoting
      double sig = 0.0;
      for (int i = k; i < n; ++i) {
        if (i == r) continue;
        sig = std::max(sig, std::fabs(i > r ? w(i, r) : w(r, i)));
      }
      if (akk * sig >= alpha * lam * lam) {
        pivot_size = 1;
      } else if (std::fabs(w(r, r)) >= alpha * sig) {
        swap_sym(k, r, k);
        pivot_size = 1;
      } else {
        swap_sym(k + 1, r, k);
        pivot_size = 2;
      }
    }

    if (pivot_size == 1) {
      const double piv = w(k, k);
      f.d[k] = piv;
      f.block_starts.push_back(k);
      f.block_sizes.push_back(1);
      if (std::fabs(piv) > zero_tol) {
        for (int i = k + 1; i < n; ++i) {
          f.l(i, k) = w(i, k) / piv;
          col1[i] = f.l(i, k);
        }
#pragma omp parallel for schedule(static, 8) if (par)
        for (int i = k + 1; i < n; ++i) {
          const double c = col1[i] * piv;
          double* row = w.row(i);
          for (int j = k + 1; j <= i; ++j) row[j] -= c * col1[j];
        }
      }
      ++k;
    } else {
      const double d11 = w(k, k);
      const double d21 = w(k + 1, k);
      const double d22 = w(k + 1, k + 1);
      f.d[k] = d11;
      f.d[k + 1] = d22;
      f.d_sub[k] = d21;
      f.block_starts.push_back(k);
      f.block_sizes.push_back(2);
      const double det = d11 * d22 - d21 * d21;
      for (int i = k + 2; i < n; ++i) {
        const double b1 = w(i, k);
        const double b2 = w(i, k + 1);
        f.l(i, k) = (d22 * b1 - d21 * b2) / det;
        f.l(i, k + 1) = (d11 * b2 - d21 * b1) / det;
        col1[i] = f.l(i, k);
        col2[i] = f.l(i, k + 1);
      }
#pragma omp parallel for schedule(static, 8) if (par)
      for (int i = k + 2; i < n; ++i) {
        const double c1 = w(i, k);
        const double c2 = w(i, k + 1);
        double* row = w.row(i);
        for (int j = k + 2; j <= i; ++j)
          row[j] -= c1 * col1[j] + c2 * col2[j];
      }
      k += 2;
    }
  }
  return f;
}

BlockDiagEig diagonalize_block_diag(const LdlFactorization& f) {
  BlockDiagEig eig;
  eig.d = f.d;
  for (size_t b = 0; b < f.block_starts.size(); ++b) {
    if (f.block_sizes[b] != 2) continue;
    const int i = f.block_starts[b];
    const double a11 = f.d[i];
    const double a21 = f.d_sub[i];
    const double a22 = f.d[i + 1];
    if (a21 == 0.0) continue;
    // closed-form symmetric Schur rotation
    const double tau = (a22 - a11) / (2.0 * a21);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                     (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    eig.d[i] = a11 - t * a21;
    eig.d[i + 1] = a22 + t * a21;
    eig.rotations.push_back({i, c, s});
  }
  return eig;
}

DenseMatrix ldl_solve(const LdlFactorization& f, const DenseMatrix& b) {
  const int n = f.size();
  if (b.rows() != n)
    throw_error(Errc::invalid_argument, "ldl_solve: rhs size mismatch");
  const int m = b.cols();
  // permute rows
  DenseMatrix x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = b(f.perm[i], j);

  kernels::solve_unit_lower_inplace(f.l, x);

  // block-diagonal solve
  double dmax = 0.0;
  for (double v : f.d) dmax = std::max(dmax, std::fabs(v));
  for (double v : f.d_sub) dmax = std::max(dmax, std::fabs(v));
  const double tiny = n * kUnitRoundoff * kUnitRoundoff * dmax;
  for (size_t bidx = 0; bidx < f.block_starts.size(); ++bidx) {
    const int i = f.block_starts[bidx];
    if (f.block_sizes[bidx] == 1) {
      const double piv = f.d[i];
      if (piv == 0.0 || std::fabs(piv) <= tiny)
        throw_error(Errc::singular, "ldl_solve: zero pivot");
      for (int j = 0; j < m; ++j) x(i, j) /= piv;
    } else {
      const double d11 = f.d[i];
      const double d21 = f.d_sub[i];
      const double d22 = f.d[i + 1];
      const double det = d11 * d22 - d21 * d21;
      if (det == 0.0 || std::fabs(det) <= tiny * tiny)
        throw_error(Errc::singular, "ldl_solve: singular 2x2 block");
      for (int j = 0; j < m; ++j) {
        const double b1 = x(i, j);
        const double b2 = x(i + 1, j);
        x(i, j) = (d22 * b1 - d21 * b2) / det;
        x(i + 1, j) = (d11 * b2 - d21 * b1) / det;
      }
    }
  }

  kernels::solve_unit_lower_transposed_inplace(f.l, x);

  DenseMatrix out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out(f.perm[i], j) = x(i, j);
  return out;
}

JacobiEig sym_eig_jacobi(const DenseMatrix& a) {
  require_symmetric(a, "sym_eig_jacobi");
  const int n = a.rows();
  DenseMatrix w = a;
  DenseMatrix q = DenseMatrix::identity(n);
  const double anorm = frobenius_norm(a);
  const double target = kUnitRoundoff * anorm;
  const bool par = kernels::parallel_enabled() && n > 96;

  auto offdiag_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * w(i, j) * w(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 30;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm() <= target) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int qi = p + 1; qi < n; ++qi) {
        const double apq = w(p, qi);
        if (apq == 0.0) continue;
        const double app = w(p, p);
        const double aqq = w(qi, qi);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
#pragma omp parallel for schedule(static) if (par)
        for (int i = 0; i < n; ++i) {
          if (i != p && i != qi) {
            const double wip = w(i, p);
            const double wiq = w(i, qi);
            w(i, p) = c * wip - s * wiq;
            w(i, qi) = s * wip + c * wiq;
            w(p, i) = w(i, p);
            w(qi, i) = w(i, qi);
          }
          const double qip = q(i, p);
          const double qiq = q(i, qi);
          q(i, p) = c * qip - s * qiq;
          q(i, qi) = s * qip + c * qiq;
        }
        w(p, p) = app - t * apq;
        w(qi, qi) = aqq + t * apq;
        w(p, qi) = w(qi, p) = 0.0;
      }
    }
  }
  if (sweep == kMaxSweeps && offdiag_norm() > target)
    throw_error(Errc::no_convergence, "sym_eig_jacobi: no convergence in 30 sweeps");

  JacobiEig out;
  out.q = std::move(q);
  out.lambda.resize(n);
  for (int i = 0; i < n; ++i) out.lambda[i] = w(i, i);
  out.sweeps = sweep;
  return out;
}

namespace {

// Hager's 1-norm estimator for B = (sigma A)^{-1}; at most five solves.
double estimate_inv_one_norm(const LdlFactorization& f) {
  const int n = f.size();
  DenseMatrix x(n, 1, 1.0 / n);
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    DenseMatrix y = ldl_solve(f, x);
    double ynorm = 0.0;
    for (int i = 0; i < n; ++i) ynorm += std::fabs(y(i, 0));
    est = std::max(est, ynorm);
    DenseMatrix xi(n, 1);
    for (int i = 0; i < n; ++i) xi(i, 0) = y(i, 0) >= 0.0 ? 1.0 : -1.0;
    DenseMatrix z = ldl_solve(f, xi);  // B symmetric: B^T xi = B xi
    int jmax = 0;
    double zmax = 0.0;
    double ztx = 0.0;
    for (int i = 0; i < n; ++i) {
      const double av = std::fabs(z(i, 0));
      if (av > zmax) {
        zmax = av;
        jmax = i;
      }
      ztx += z(i, 0) * x(i, 0);
    }
    if (zmax <= ztx) break;
    x = DenseMatrix(n, 1, 0.0);
    x(jmax, 0) = 1.0;
  }
  return est;
}

}  // namespace

NormBounds norm_bounds(const DenseMatrix& a, const Signature& sigma) {
  if (!a.square())
    throw_error(Errc::invalid_argument, "norm_bounds: matrix not square");
  const int n = a.rows();
  const double alpha =
      std::min(frobenius_norm(a), std::sqrt(one_norm(a) * inf_norm(a)));
  const DenseMatrix sa = sigma_left(sigma, a);
  const LdlFactorization f = ldl_bunch_kaufman(sa);
  const double inv_norm = estimate_inv_one_norm(f);
  if (!(inv_norm > 0.0) || !std::isfinite(inv_norm))
    throw_error(Errc::singular, "norm_bounds: inverse norm estimate failed");
  // ||A^-1||_1 can exceed ||A^-1||_2 by at most sqrt(n)
  const double beta = 1.0 / (inv_norm * std::sqrt(double(n)));
  return NormBounds{alpha, beta};
}

}  // namespace psdc
