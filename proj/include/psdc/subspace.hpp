#pragma once

#include "psdc/matrix.hpp"

namespace psdc {

// Invariant-subspace bases extracted from the sign-function projectors
// P± = (I ± S)/2. [Qplus Qminus]^T sigma [Qplus Qminus] = diag(sigma_hat).
struct SubspaceBasis {
  DenseMatrix q_plus;   // n x r_plus
  DenseMatrix q_minus;  // n x r_minus
  Signature sigma_hat;  // length n, [sigma_hat_plus, sigma_hat_minus]
  int r_plus = 0;
  int r_minus = 0;
};

// Rank of a numerically idempotent projector from its trace; errors when the
// trace is further than 0.1 from an integer.
int rank_from_trace(const DenseMatrix& p);

// Orthogonal bases of a symmetric sign matrix (sigma = I case): Cholesky of
// the leading principal block of each projector, extended to the remaining
// rows. No pivoting; a singular leading block raises not_positive_definite.
SubspaceBasis orth_basis_chol(const DenseMatrix& s);

// General pseudosymmetric case: truncated LDL^T of sigma*P± with the rank
// taken from the projector trace. sigma_hat carries the signs of the kept
// D eigenvalues.
SubspaceBasis hyp_basis_ldl(const DenseMatrix& s, const Signature& sigma);

// Definite case, rank known a priori from the signature split. Cholesky of
// the sub-block selected by the +1 (resp. -1) positions of sigma; may break
// down on ill-conditioned inputs, which is the documented failure mode.
SubspaceBasis def_basis_chol(const DenseMatrix& s, const Signature& sigma);

// Definite case, robust variant: truncated LDL^T of sigma*P+ and -sigma*P-;
// sigma_hat = diag(I, -I) exactly.
SubspaceBasis def_basis_ldl(const DenseMatrix& s, const Signature& sigma);

}  // namespace psdc
