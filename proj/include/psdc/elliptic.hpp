#pragma once

#include <vector>

namespace psdc {

// Complete elliptic integral of the first kind K(k), 0 <= k < 1, via the
// arithmetic-geometric mean.
double complete_elliptic_K(double k);

// K(k') for k' = sqrt(1 - k^2), taking the complementary modulus k directly
// so that k' close to 1 loses no accuracy.
double complete_elliptic_K_complementary(double k_complement);

struct JacobiElliptic {
  double sn, cn, dn;
};

// Jacobi elliptic functions sn(u,k), cn(u,k), dn(u,k) for 0 <= k < 1.
JacobiElliptic jacobi_sn_cn(double u, double k);

// Same, parameterized by the complementary parameter mc = 1 - k^2.
JacobiElliptic jacobi_sn_cn_complementary(double u, double mc);

// Coefficients of the scaled Zolotarev function
//   Zhat_{2r+1}(x) = Chat * x * prod_j (x^2 + c_{2j}) / (x^2 + c_{2j-1})
// the minimax rational approximation to sign(x) on [-1,-ell] U [ell,1],
// normalized so Zhat(1) = 1.
struct ZolotarevParams {
  int r = 0;
  double ell = 0.0;
  std::vector<double> c;  // c_1..c_{2r}, stored c[0..2r-1]
  std::vector<double> a;  // partial-fraction weights a_1..a_r
  double c_hat = 1.0;
};

// ell in [1e-16, 1), 1 <= r <= 16.
ZolotarevParams zolotarev_coeffs(double ell, int r);

// Zhat evaluated in product form.
double eval_zhat(double x, const ZolotarevParams& p);
// Zhat evaluated via the partial-fraction decomposition
//   Chat * x * (1 + sum_j a_j / (x^2 + c_{2j-1})).
double eval_zhat_partial_fraction(double x, const ZolotarevParams& p);

// ell_1 = Zhat(ell; ell), the lower spectral bound after one iteration.
double ell_update(const ZolotarevParams& p);

// Smallest r in 1..8 such that two composed applications of Zhat_{2r+1} map
// [ell, 1] into [1 - 1e-15, 1].
int choose_rank(double ell);

}  // namespace psdc
