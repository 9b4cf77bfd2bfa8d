#pragma once

#include <vector>

#include "psdc/matrix.hpp"

namespace psdc {

// Lower-triangular Cholesky factor, A = L L^T.
struct CholeskyFactor {
  DenseMatrix l;
};

// Symmetric indefinite factorization P^T A P = L D L^T with Bunch-Kaufman
// partial pivoting. perm maps factored index k to the original row/column
// perm[k]. D is block diagonal; d holds the diagonal, d_sub[k] the
// subdiagonal entry of a 2x2 block starting at k (zero otherwise).
struct LdlFactorization {
  std::vector<int> perm;
  DenseMatrix l;  // unit lower triangular
  std::vector<double> d;
  std::vector<double> d_sub;
  std::vector<int> block_starts;
  std::vector<int> block_sizes;  // 1 or 2

  int size() const noexcept { return int(d.size()); }
  DenseMatrix reconstruct() const;  // P L D L^T P^T
  DenseMatrix d_dense() const;
};

// Eigendecomposition of the block-diagonal D factor: V^T D V = diag(d) with
// V orthogonal and block diagonal (2x2 rotations on the listed planes).
struct BlockDiagEig {
  struct Rotation {
    int i;  // acts on rows/columns (i, i+1)
    double c, s;
  };
  std::vector<double> d;
  std::vector<Rotation> rotations;

  DenseMatrix dense(int n) const;  // V as a dense matrix
};

// M <- M * V for the block-diagonal V above (O(n^2)).
void apply_block_rotations_right(DenseMatrix& m, const BlockDiagEig& eig);

CholeskyFactor cholesky(const DenseMatrix& a);

// zero_pivot_tol < 0 selects the default n*u*max|a_ii| rule that turns the
// numerically zero trailing blocks of rank-deficient inputs (projectors)
// into exact zero pivots. The sign iterations pass 0.0: their Gram matrices
// carry legitimately tiny pivots at high condition numbers, and only an
// exactly zero column is a genuine breakdown there.
LdlFactorization ldl_bunch_kaufman(const DenseMatrix& a,
                                   double zero_pivot_tol = -1.0);

BlockDiagEig diagonalize_block_diag(const LdlFactorization& f);

// Solves A x = b given the factorization of A; b may have many columns.
// Throws Errc::singular when a D block is numerically singular.
DenseMatrix ldl_solve(const LdlFactorization& f, const DenseMatrix& b);

// Symmetric eigensolver, cyclic Jacobi. Returns orthogonal q and eigenvalues
// lambda with Q^T A Q = diag(lambda); no ordering is imposed.
struct JacobiEig {
  DenseMatrix q;
  std::vector<double> lambda;
  int sweeps = 0;
};
JacobiEig sym_eig_jacobi(const DenseMatrix& a);

// alpha >= sigma_max(A), beta <= sigma_min(A). alpha from norm bounds, beta
// from a Hager-style 1-norm estimate of ||A^-1||_1 on the LDL factorization
// of sigma*A, deflated by sqrt(n).
struct NormBounds {
  double alpha;
  double beta;
};
NormBounds norm_bounds(const DenseMatrix& a, const Signature& sigma);

}  // namespace psdc
