#include "psdc/elliptic.hpp"

#include <cmath>

#include "psdc/error.hpp"
#include "psdc/matrix.hpp"

namespace psdc {

namespace {
constexpr int kAgmMaxIter = 60;

template <typename F>
F agm_t(F a, F b, F tol) {
  for (int i = 0; i < kAgmMaxIter; ++i) {
    if (std::fabs(a - b) <= tol * a) break;
    const F m = F(0.5) * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return F(0.5) * (a + b);
}

// Bulirsch's sncndn: descending Landen/AGM recursion, parameterized by the
// complementary parameter mc = 1 - k^2. Accuracy is about tol^2.
template <typename F>
void sncndn_t(F uu, F mc, F tol, F& sn, F& cn, F& dn) {
  F a = F(1);
  dn = F(1);
  F em[kAgmMaxIter], en[kAgmMaxIter];
  F emc = mc;
  int l = 0;
  for (int i = 0; i < kAgmMaxIter; ++i) {
    l = i;
    em[i] = a;
    emc = std::sqrt(emc);
    en[i] = emc;
    const F c = F(0.5) * (a + emc);
    if (std::fabs(a - emc) <= tol * a) break;
    emc *= a;
    a = c;
  }
  const F c_top = F(0.5) * (a + emc);
  const F u = uu * c_top;
  sn = std::sin(u);
  cn = std::cos(u);
  if (sn != F(0)) {
    F aa = cn / sn;
    F cc = c_top * aa;
    for (int ii = l; ii >= 0; --ii) {
      const F b = em[ii];
      aa *= cc;
      cc *= dn;
      dn = (en[ii] + aa) / (b + aa);
      aa = cc / b;
    }
    const F r = F(1) / std::sqrt(cc * cc + F(1));
    sn = sn >= F(0) ? r : -r;
    cn = cc * sn;
  }
}
}  // namespace

double complete_elliptic_K(double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw_error(Errc::modulus_out_of_range, "complete_elliptic_K: need 0 <= k < 1");
  const double kc = std::sqrt((1.0 - k) * (1.0 + k));
  return M_PI / (2.0 * agm_t(1.0, kc, kUnitRoundoff));
}

double complete_elliptic_K_complementary(double k_complement) {
  if (!(k_complement > 0.0 && k_complement <= 1.0))
    throw_error(Errc::modulus_out_of_range,
                "complete_elliptic_K_complementary: need 0 < k' <= 1");
  return M_PI / (2.0 * agm_t(1.0, k_complement, kUnitRoundoff));
}

JacobiElliptic jacobi_sn_cn_complementary(double u, double mc) {
  if (!(mc > 0.0 && mc <= 1.0))
    throw_error(Errc::modulus_out_of_range, "jacobi_sn_cn: need 0 <= k < 1");
  if (!std::isfinite(u))
    throw_error(Errc::invalid_argument, "jacobi_sn_cn: non-finite argument");
  JacobiElliptic z;
  sncndn_t(u, mc, 1e-12, z.sn, z.cn, z.dn);
  return z;
}

JacobiElliptic jacobi_sn_cn(double u, double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw_error(Errc::modulus_out_of_range, "jacobi_sn_cn: need 0 <= k < 1");
  if (k == 0.0) return JacobiElliptic{std::sin(u), std::cos(u), 1.0};
  return jacobi_sn_cn_complementary(u, (1.0 - k) * (1.0 + k));
}

ZolotarevParams zolotarev_coeffs(double ell, int r) {
  if (!(ell >= 1e-16 && ell < 1.0))
    throw_error(Errc::invalid_argument, "zolotarev_coeffs: need ell in [1e-16, 1)");
  if (r < 1 || r > 16)
    throw_error(Errc::invalid_argument, "zolotarev_coeffs: need 1 <= r <= 16");

  ZolotarevParams p;
  p.r = r;
  p.ell = ell;

  // The chain K' -> i K'/(2r+1) -> sn/cn amplifies rounding by roughly the
  // argument size (up to ~40 at ell = 1e-16), which would cost the two-step
  // coverage its last digit. The scalar coefficient computation therefore
  // runs in extended precision; everything stored and consumed is double.
  using F = long double;
  const F lell = F(ell);
  const F ftol = F(1e-17);
  // K' = K(ell') with ell' = sqrt(1 - ell^2); the AGM runs on ell directly.
  const F kprime = F(M_PIl) / (F(2) * agm_t(F(1), lell, ftol));
  const F mc = lell * lell;  // complementary parameter of modulus ell'

  std::vector<F> c(2 * r);
  p.c.resize(2 * r);
  for (int i = 1; i <= 2 * r; ++i) {
    F sn, cn, dn;
    sncndn_t(F(i) * kprime / F(2 * r + 1), mc, F(1e-10), sn, cn, dn);
    const F ratio = sn / cn;
    c[i - 1] = lell * lell * ratio * ratio;
    p.c[i - 1] = double(c[i - 1]);
  }

  // residues of the partial-fraction decomposition
  p.a.resize(r);
  for (int j = 1; j <= r; ++j) {
    F num = F(1);
    for (int k = 1; k <= r; ++k) num *= c[2 * j - 2] - c[2 * k - 1];
    F den = F(1);
    for (int k = 1; k <= r; ++k) {
      if (k == j) continue;
      den *= c[2 * j - 2] - c[2 * k - 2];
    }
    p.a[j - 1] = double(-num / den);
  }

  F c_hat = F(1);
  for (int j = 1; j <= r; ++j)
    c_hat *= (F(1) + c[2 * j - 2]) / (F(1) + c[2 * j - 1]);
  p.c_hat = double(c_hat);

  return p;
}

double eval_zhat(double x, const ZolotarevParams& p) {
  double v = p.c_hat * x;
  for (int j = 1; j <= p.r; ++j)
    v *= (x * x + p.c[2 * j - 1]) / (x * x + p.c[2 * j - 2]);
  return v;
}

double eval_zhat_partial_fraction(double x, const ZolotarevParams& p) {
  double s = 1.0;
  for (int j = 1; j <= p.r; ++j) s += p.a[j - 1] / (x * x + p.c[2 * j - 2]);
  return p.c_hat * x * s;
}

double ell_update(const ZolotarevParams& p) {
  return eval_zhat(p.ell, p);
}

int choose_rank(double ell) {
  if (!(ell >= 1e-16))
    throw_error(Errc::invalid_argument, "choose_rank: need ell >= 1e-16");
  if (ell >= 1.0) return 1;
  for (int r = 1; r <= 8; ++r) {
    // Zhat maps [ell, 1] into [Zhat(ell), 1]: by equioscillation the lower
    // edge of the image is attained at x = ell.
    const ZolotarevParams p1 = zolotarev_coeffs(ell, r);
    const double ell1 = ell_update(p1);
    if (ell1 >= 1.0) return r;
    const ZolotarevParams p2 = zolotarev_coeffs(ell1, r);
    if (eval_zhat(ell1, p2) >= 1.0 - 1e-15) return r;
  }
  return 8;
}

}  // namespace psdc
