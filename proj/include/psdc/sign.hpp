#pragma once

#include <vector>

#include "psdc/elliptic.hpp"
#include "psdc/matrix.hpp"

namespace psdc {

enum class SignMethod { newton, sigma_dwh_ldl, sigma_dwh_ldliqr2, zolo_pd };

const char* sign_method_name(SignMethod m);

struct SignResult {
  DenseMatrix s;
  int iterations = 0;
  SignMethod method = SignMethod::newton;
  struct IterationRecord {
    double rel_diff;  // ||X_{k+1} - X_k||_F / ||X_{k+1}||_F
    double ell;       // lower spectral bound, NaN where not applicable
  };
  std::vector<IterationRecord> trace;
};

// Stacked factor [X; eta*I] = [H1; H2] R with
// [H1; H2]^T (sigma ⊕ sigma) [H1; H2] = sigma_hat. Computed from the LDL^T
// factorization of the Gram matrix X^T sigma X + eta^2 sigma, followed by one
// refinement pass on the produced factor (the two-pass scheme).
struct HyperbolicQrResult {
  DenseMatrix h1;
  DenseMatrix h2;
  Signature sigma_hat;
};

HyperbolicQrResult hyperbolic_qr_tall(const DenseMatrix& x, double eta,
                                      const Signature& sigma);

// One Zolotarev iteration X -> Chat (X + sum_j (a_j/sqrt(c_{2j-1})) H1_j
// sigma_hat_j H2_j^T sigma), the r factorizations being independent.
DenseMatrix zolo_step_hr(const DenseMatrix& x, const Signature& sigma,
                         const ZolotarevParams& params);

// Same map via LDL^T solves: X -> Chat (X + sum_j a_j X Z_j^{-1} sigma) with
// Z_j = X^T sigma X + c_{2j-1} sigma.
DenseMatrix zolo_step_ldl(const DenseMatrix& x, const Signature& sigma,
                          const ZolotarevParams& params);

// Scaled Newton iteration with suboptimal scaling
// (mu_0 = 1/sqrt(alpha beta), mu_{k+1} = sqrt(2 mu_k / (1 + mu_k^2))),
// inverses via LDL^T of sigma X.
SignResult sign_newton(const DenseMatrix& a, const Signature& sigma);

enum class DwhMode { ldl, ldliqr2 };

// Dynamically weighted Halley iteration, realized as the r = 1 Zolotarev
// iteration with a per-step lower-bound update.
SignResult sign_sigma_dwh(const DenseMatrix& a, const Signature& sigma,
                          DwhMode mode);

// Two-step Zolotarev sign iteration for definite pseudosymmetric matrices:
// first iterate through the hyperbolic QR route, second through LDL^T solves.
SignResult sign_zolo_pd(const DenseMatrix& a, const Signature& sigma);

SignResult compute_sign(const DenseMatrix& a, const Signature& sigma,
                        SignMethod method);

}  // namespace psdc
