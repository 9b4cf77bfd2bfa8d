#include "psdc/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psdc/factor.hpp"
#include "psdc/kernels.hpp"

namespace psdc {

namespace {

DenseMatrix projector(const DenseMatrix& s, double sign) {
  const int n = s.rows();
  DenseMatrix p = 0.5 * sign * s;
  for (int i = 0; i < n; ++i) p(i, i) += 0.5;
  return p;
}

// first nonzero entry of each column made positive, for reproducible output
void normalize_column_signs(DenseMatrix& q) {
  for (int j = 0; j < q.cols(); ++j) {
    double lead = 0.0;
    for (int i = 0; i < q.rows(); ++i) {
      if (q(i, j) != 0.0) {
        lead = q(i, j);
        break;
      }
    }
    if (lead < 0.0)
      for (int i = 0; i < q.rows(); ++i) q(i, j) = -q(i, j);
  }
}

// Columns of W = P L V, restricted to `keep`, scaled by sqrt(|d|).
DenseMatrix scaled_factor_columns(const LdlFactorization& f,
                                  const BlockDiagEig& eig,
                                  const std::vector<int>& keep) {
  const int n = f.size();
  DenseMatrix lv = f.l;
  apply_block_rotations_right(lv, eig);
  DenseMatrix w(n, int(keep.size()));
  for (int c = 0; c < int(keep.size()); ++c) {
    const int j = keep[c];
    const double s = std::sqrt(std::fabs(eig.d[j]));
    for (int i = 0; i < n; ++i) w(f.perm[i], c) = lv(i, j) * s;
  }
  return w;
}

std::vector<int> indices_sorted_desc(const std::vector<double>& v,
                                     bool by_abs) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double va = by_abs ? std::fabs(v[a]) : v[a];
    const double vb = by_abs ? std::fabs(v[b]) : v[b];
    return va > vb;
  });
  return idx;
}

}  // namespace

int rank_from_trace(const DenseMatrix& p) {
  if (!p.square())
    throw_error(Errc::invalid_argument, "rank_from_trace: matrix not square");
  const double t = trace(p);
  const double r = std::round(t);
  if (std::fabs(t - r) > 0.1)
    throw_error(Errc::ill_conditioned_projector,
                "rank_from_trace: trace " + std::to_string(t) +
                    " not near an integer");
  if (r < 0.0 || r > double(p.rows()))
    throw_error(Errc::ill_conditioned_projector,
                "rank_from_trace: trace outside [0, n]");
  return int(r);
}

SubspaceBasis orth_basis_chol(const DenseMatrix& s) {
  if (!s.square())
    throw_error(Errc::invalid_argument, "orth_basis_chol: matrix not square");
  const int n = s.rows();

  // Cholesky of an r x r principal block of the projector, extended to the
  // remaining rows: Q = P(:, sel) L^{-T}. P+ uses the leading block; the
  // complementary projector P- concentrates in the trailing coordinates, so
  // its trailing block is used (the leading one is singular whenever P+ fills
  // the leading coordinates exactly). No pivoting: a singular block is
  // reported, not repaired.
  auto extract = [&](double sign, int rank, int offset) {
    const DenseMatrix p = projector(s, sign);
    DenseMatrix head(rank, rank);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) head(i, j) = p(offset + i, offset + j);
    const CholeskyFactor cf = cholesky(head);
    DenseMatrix q(n, rank);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < rank; ++j) q(i, j) = p(i, offset + j);
    kernels::solve_lower_transposed_right_inplace(cf.l, q);
    return q;
  };

  SubspaceBasis out;
  out.r_plus = rank_from_trace(projector(s, 1.0));
  out.r_minus = n - out.r_plus;
  out.q_plus = extract(1.0, out.r_plus, 0);
  out.q_minus = extract(-1.0, out.r_minus, out.r_plus);
  normalize_column_signs(out.q_plus);
  normalize_column_signs(out.q_minus);
  // [Q+ Q-] is orthogonal: the ambient scalar product is Euclidean
  out.sigma_hat = Signature::all_plus(n);
  return out;
}

SubspaceBasis hyp_basis_ldl(const DenseMatrix& s, const Signature& sigma) {
  if (!s.square() || sigma.size() != s.rows())
    throw_error(Errc::invalid_argument, "hyp_basis_ldl: shape mismatch");
  const int n = s.rows();

  std::vector<double> sigma_hat_entries;
  sigma_hat_entries.reserve(n);

  auto extract = [&](double sign, int rank) {
    const DenseMatrix sp = sigma_left(sigma, projector(s, sign));
    const LdlFactorization f = ldl_bunch_kaufman(sp);
    const BlockDiagEig eig = diagonalize_block_diag(f);
    const std::vector<int> order = indices_sorted_desc(eig.d, /*by_abs=*/true);
    const std::vector<int> keep(order.begin(), order.begin() + rank);

    // kept and discarded magnitudes must be separated
    double kept_min = 0.0;
    double drop_max = 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = std::fabs(eig.d[order[i]]);
      if (i < rank)
        kept_min = i == 0 ? m : std::min(kept_min, m);
      else
        drop_max = std::max(drop_max, m);
    }
    if (rank > 0 && drop_max > 0.0 && kept_min < 1e6 * drop_max)
      throw_error(Errc::rank_mismatch,
                  "hyp_basis_ldl: kept and discarded pivots not separated");

    const DenseMatrix w = scaled_factor_columns(f, eig, keep);
    // Q = sigma W sigma_hat_local
    DenseMatrix q = sigma_left(sigma, w);
    for (int c = 0; c < rank; ++c) {
      const double sh = eig.d[keep[c]] > 0.0 ? 1.0 : -1.0;
      sigma_hat_entries.push_back(sh);
      if (sh < 0.0)
        for (int i = 0; i < n; ++i) q(i, c) = -q(i, c);
    }
    return q;
  };

  SubspaceBasis out;
  out.r_plus = rank_from_trace(projector(s, 1.0));
  out.r_minus = n - out.r_plus;
  out.q_plus = extract(1.0, out.r_plus);
  out.q_minus = extract(-1.0, out.r_minus);
  normalize_column_signs(out.q_plus);
  normalize_column_signs(out.q_minus);
  out.sigma_hat = Signature(std::move(sigma_hat_entries));
  return out;
}

SubspaceBasis def_basis_chol(const DenseMatrix& s, const Signature& sigma) {
  if (!s.square() || sigma.size() != s.rows())
    throw_error(Errc::invalid_argument, "def_basis_chol: shape mismatch");
  const int n = s.rows();
  const int p = sigma.count_plus();
  const int q = n - p;

  // symmetric permutation sorting sigma to (+1 first); undone on output rows
  std::vector<int> perm;
  perm.reserve(n);
  for (int i = 0; i < n; ++i)
    if (sigma[i] > 0) perm.push_back(i);
  for (int i = 0; i < n; ++i)
    if (sigma[i] < 0) perm.push_back(i);

  // cheap guard against misuse on a non-definite source
  const DenseMatrix pp = projector(s, 1.0);
  const double tr = trace(pp);
  if (std::fabs(tr - double(p)) > 0.1)
    throw_error(Errc::ill_conditioned_projector,
                "def_basis_chol: projector trace does not match signature split");

  auto extract = [&](double sign, int rank, int offset) {
    const DenseMatrix proj = projector(s, sign);
    DenseMatrix pt(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pt(i, j) = proj(perm[i], perm[j]);
    // leading (trailing) block of sigma~ P~ is P~ itself on the selected rows
    DenseMatrix head(rank, rank);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) head(i, j) = pt(offset + i, offset + j);
    const CholeskyFactor cf = cholesky(head);
    DenseMatrix qt(n, rank);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < rank; ++j) qt(i, j) = pt(i, offset + j);
    kernels::solve_lower_transposed_right_inplace(cf.l, qt);
    DenseMatrix out(n, rank);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < rank; ++j) out(perm[i], j) = qt(i, j);
    return out;
  };

  SubspaceBasis out;
  out.r_plus = p;
  out.r_minus = q;
  out.q_plus = extract(1.0, p, 0);
  out.q_minus = extract(-1.0, q, p);
  normalize_column_signs(out.q_plus);
  normalize_column_signs(out.q_minus);
  out.sigma_hat = Signature::plus_minus(p, q);
  return out;
}

SubspaceBasis def_basis_ldl(const DenseMatrix& s, const Signature& sigma) {
  if (!s.square() || sigma.size() != s.rows())
    throw_error(Errc::invalid_argument, "def_basis_ldl: shape mismatch");
  const int n = s.rows();
  const int p = sigma.count_plus();

  auto extract = [&](double sign, int rank) {
    // sigma P+ and -sigma P- are positive semidefinite of rank p, q
    DenseMatrix sp = sigma_left(sigma, projector(s, sign));
    if (sign < 0.0)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sp(i, j) = -sp(i, j);
    const LdlFactorization f = ldl_bunch_kaufman(sp);
    const BlockDiagEig eig = diagonalize_block_diag(f);
    const std::vector<int> order = indices_sorted_desc(eig.d, /*by_abs=*/false);
    std::vector<int> keep(order.begin(), order.begin() + rank);
    for (int j : keep)
      if (eig.d[j] <= 0.0)
        throw_error(Errc::rank_mismatch,
                    "def_basis_ldl: kept pivot not positive");
    const DenseMatrix w = scaled_factor_columns(f, eig, keep);
    return sigma_left(sigma, w);
  };

  SubspaceBasis out;
  out.r_plus = p;
  out.r_minus = n - p;
  out.q_plus = extract(1.0, out.r_plus);
  out.q_minus = extract(-1.0, out.r_minus);
  normalize_column_signs(out.q_plus);
  normalize_column_signs(out.q_minus);
  out.sigma_hat = Signature::plus_minus(out.r_plus, out.r_minus);
  return out;
}

}  // namespace psdc
