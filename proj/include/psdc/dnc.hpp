#pragma once

#include "psdc/matrix.hpp"
#include "psdc/sign.hpp"
#include "psdc/subspace.hpp"

namespace psdc {

enum class BasisMethod { chol, ldl };

const char* basis_method_name(BasisMethod b);

struct DivisionResult {
  SubspaceBasis basis;
  DenseMatrix a11;
  DenseMatrix a22;
  Signature sigma_plus;
  Signature sigma_minus;
  double backward_error = 0.0;  // ||Q+^T sigma A Q-||_F / ||A||_F
  SignResult sign_result;
};

struct DivideOptions {
  SignMethod method = SignMethod::zolo_pd;
  BasisMethod basis = BasisMethod::ldl;
  double shift = 0.0;
  // With definite=true the rank split is read off the signature
  // (def_basis_*); otherwise extraction is trace-based (hyp_basis_ldl) or,
  // for uniform signatures, orthogonal (orth_basis_chol).
  bool definite = false;
};

DivisionResult spectral_divide(const DenseMatrix& a, const Signature& sigma,
                               const DivideOptions& opt);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  DenseMatrix v;
  Signature sigma_hat;
  double residual = 0.0;             // ||A V - V diag(lambda)||_F / ||A||_F
  double orthogonality_defect = 0.0; // ||V^T sigma V - diag(sigma_hat)||_F
};

// Definite pseudosymmetric eigensolver: one spectral division at shift zero
// decouples the problem into an SPD and a negative definite block, each
// handled by the Jacobi eigensolver.
EigenDecomposition solve_definite(const DenseMatrix& a, const Signature& sigma,
                                  SignMethod method = SignMethod::zolo_pd);

struct RecursiveConfig {
  SignMethod method = SignMethod::newton;
  int max_shift_retries = 3;
};

// shift for attempt k: trace mean, then a deterministic perturbation ladder.
double select_shift(const DenseMatrix& a, const Signature& sigma, int attempt);

// General pseudosymmetric eigensolver by recursive spectral division;
// requires a real spectrum. Falls back to the Jacobi solver when the
// signature becomes uniform.
EigenDecomposition solve_recursive(const DenseMatrix& a, const Signature& sigma,
                                   const RecursiveConfig& config = {});

}  // namespace psdc
