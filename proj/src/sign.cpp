#include "psdc/sign.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "psdc/factor.hpp"
#include "psdc/kernels.hpp"

namespace psdc {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void require_square(const DenseMatrix& a, const Signature& sigma, const char* op) {
  if (!a.square() || sigma.size() != a.rows())
    throw_error(Errc::invalid_argument, std::string(op) + ": shape mismatch");
}
}  // namespace

const char* sign_method_name(SignMethod m) {
  switch (m) {
    case SignMethod::newton: return "newton";
    case SignMethod::sigma_dwh_ldl: return "dwh-ldl";
    case SignMethod::sigma_dwh_ldliqr2: return "dwh-ldliqr2";
    case SignMethod::zolo_pd: return "zolo";
  }
  return "unknown";
}

namespace detail {
HyperbolicQrResult hqr_with_gram(const DenseMatrix& x, double eta,
                                 const Signature& sigma,
                                 const DenseMatrix& gram_x);
}

HyperbolicQrResult hyperbolic_qr_tall(const DenseMatrix& x, double eta,
                                      const Signature& sigma) {
  require_square(x, sigma, "hyperbolic_qr_tall");
  if (!(eta > 0.0))
    throw_error(Errc::invalid_argument, "hyperbolic_qr_tall: eta must be positive");
  return detail::hqr_with_gram(x, eta, sigma, kernels::gram_sigma(x, sigma));
}

HyperbolicQrResult detail::hqr_with_gram(const DenseMatrix& x, double eta,
                                         const Signature& sigma,
                                         const DenseMatrix& gram_x) {
  const int n = x.rows();

  // Gram of the stacked matrix [X; eta I] against sigma ⊕ sigma.
  DenseMatrix m = gram_x;
  for (int i = 0; i < n; ++i) m(i, i) += eta * eta * sigma[i];

  DenseMatrix h1 = x;
  DenseMatrix h2(n, n, 0.0);
  for (int i = 0; i < n; ++i) h2(i, i) = eta;

  Signature sigma_hat = sigma;

  // Two passes: the first factors the Gram matrix, the second reorthogonalizes
  // the produced factor against sigma ⊕ sigma.
  for (int pass = 0; pass < 2; ++pass) {
    if (pass == 1) {
      m = kernels::gram_sigma(h1, sigma) + kernels::gram_sigma(h2, sigma);
    }
    // tiny pivots are legitimate here at high condition numbers (the Gram
    // matrix carries the squared small singular values); only an exactly
    // zero pivot means the stacked matrix lost rank
    const LdlFactorization f = ldl_bunch_kaufman(m, 0.0);
    const BlockDiagEig eig = diagonalize_block_diag(f);

    std::vector<double> signs(n), inv_sqrt(n);
    for (int i = 0; i < n; ++i) {
      const double di = eig.d[i];
      if (di == 0.0)
        throw_error(Errc::breakdown,
                    "hyperbolic_qr_tall: zero pivot in Gram factorization");
      signs[i] = di > 0.0 ? 1.0 : -1.0;
      inv_sqrt[i] = 1.0 / std::sqrt(std::fabs(di));
    }

    // R = |d|^{1/2} V^T L^T P^T, so H <- H R^{-1} = H P L^{-T} V |d|^{-1/2}
    auto apply_inv_r = [&](DenseMatrix& h) {
      DenseMatrix tmp(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tmp(i, j) = h(i, f.perm[j]);
      kernels::solve_unit_lower_transposed_right_inplace(f.l, tmp);
      apply_block_rotations_right(tmp, eig);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tmp(i, j) *= inv_sqrt[j];
      h = std::move(tmp);
    };
    apply_inv_r(h1);
    apply_inv_r(h2);
    sigma_hat = Signature(signs);
  }

  return HyperbolicQrResult{std::move(h1), std::move(h2), std::move(sigma_hat)};
}

namespace {

// Deterministic ordered combination of the r independent per-step terms.
// The loop body may run concurrently; each term lands in its own slot.
template <typename Fn>
std::vector<DenseMatrix> parallel_map_terms(int r, Fn&& fn) {
  std::vector<DenseMatrix> terms(r);
  std::exception_ptr first_error;
  const bool par = kernels::parallel_enabled() && r > 1;
#pragma omp parallel for schedule(dynamic, 1) if (par)
  for (int j = 0; j < r; ++j) {
    try {
      terms[j] = fn(j);
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return terms;
}

}  // namespace

DenseMatrix zolo_step_hr(const DenseMatrix& x, const Signature& sigma,
                         const ZolotarevParams& params) {
  require_square(x, sigma, "zolo_step_hr");
  const int r = params.r;
  const DenseMatrix gram = kernels::gram_sigma(x, sigma);
  auto terms = parallel_map_terms(r, [&](int j) {
    const double c_odd = params.c[2 * j];
    const HyperbolicQrResult h =
        detail::hqr_with_gram(x, std::sqrt(c_odd), sigma, gram);
    // H1 sigma_hat H2^T sigma = H1 (sigma H2 sigma_hat)^T
    const DenseMatrix h2s = sigma_left(sigma, sigma_right(h.h2, h.sigma_hat));
    DenseMatrix t = kernels::multiply_nt(h.h1, h2s);
    const double w = params.a[j] / std::sqrt(c_odd);
    for (int i = 0; i < t.rows(); ++i)
      for (int k = 0; k < t.cols(); ++k) t(i, k) *= w;
    return t;
  });
  DenseMatrix out = x;
  for (int j = 0; j < r; ++j) add_scaled(out, 1.0, terms[j]);
  return params.c_hat * out;
}

DenseMatrix zolo_step_ldl(const DenseMatrix& x, const Signature& sigma,
                          const ZolotarevParams& params) {
  require_square(x, sigma, "zolo_step_ldl");
  const int n = x.rows();
  const int r = params.r;
  const DenseMatrix gram = kernels::gram_sigma(x, sigma);
  auto terms = parallel_map_terms(r, [&](int j) {
    DenseMatrix z = gram;
    for (int i = 0; i < n; ++i) z(i, i) += params.c[2 * j] * sigma[i];
    const LdlFactorization f = ldl_bunch_kaufman(z, 0.0);
    DenseMatrix rhs(n, n, 0.0);
    for (int i = 0; i < n; ++i) rhs(i, i) = sigma[i];
    const DenseMatrix zinv_sigma = ldl_solve(f, rhs);
    DenseMatrix t = kernels::multiply(x, zinv_sigma);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) t(i, k) *= params.a[j];
    return t;
  });
  DenseMatrix out = x;
  for (int j = 0; j < r; ++j) add_scaled(out, 1.0, terms[j]);
  return params.c_hat * out;
}

SignResult sign_newton(const DenseMatrix& a, const Signature& sigma) {
  require_square(a, sigma, "sign_newton");
  const int n = a.rows();
  const NormBounds nb = norm_bounds(a, sigma);
  double mu = 1.0 / std::sqrt(nb.alpha * nb.beta);

  SignResult res;
  res.method = SignMethod::newton;
  DenseMatrix x = a;
  const double tol = 10.0 * std::sqrt(kUnitRoundoff);
  constexpr int kMaxIter = 50;
  bool converged = false;
  for (int k = 0; k < kMaxIter; ++k) {
    DenseMatrix y = mu * x;
    // Y^{-1} = (sigma Y)^{-1} sigma
    const LdlFactorization f = ldl_bunch_kaufman(sigma_left(sigma, y));
    DenseMatrix rhs(n, n, 0.0);
    for (int i = 0; i < n; ++i) rhs(i, i) = sigma[i];
    const DenseMatrix yinv = ldl_solve(f, rhs);
    DenseMatrix xnext = pseudosymmetrize(0.5 * (y + yinv), sigma);
    const double diff = frobenius_norm(xnext - x) / frobenius_norm(xnext);
    res.trace.push_back({diff, kNan});
    x = std::move(xnext);
    ++res.iterations;
    mu = std::sqrt(2.0 * mu / (1.0 + mu * mu));
    if (diff <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw_error(Errc::no_convergence, "sign_newton: no convergence in 50 iterations");

  // one unscaled cleanup step
  {
    const LdlFactorization f = ldl_bunch_kaufman(sigma_left(sigma, x));
    DenseMatrix rhs(n, n, 0.0);
    for (int i = 0; i < n; ++i) rhs(i, i) = sigma[i];
    const DenseMatrix xinv = ldl_solve(f, rhs);
    DenseMatrix xnext = pseudosymmetrize(0.5 * (x + xinv), sigma);
    const double diff = frobenius_norm(xnext - x) / frobenius_norm(xnext);
    res.trace.push_back({diff, kNan});
    x = std::move(xnext);
    ++res.iterations;
  }
  res.s = std::move(x);
  return res;
}

SignResult sign_sigma_dwh(const DenseMatrix& a, const Signature& sigma,
                          DwhMode mode) {
  require_square(a, sigma, "sign_sigma_dwh");
  const NormBounds nb = norm_bounds(a, sigma);
  double ell = std::clamp(nb.beta / nb.alpha, 1e-16, 1.0 - 1e-15);

  SignResult res;
  res.method = mode == DwhMode::ldl ? SignMethod::sigma_dwh_ldl
                                    : SignMethod::sigma_dwh_ldliqr2;
  DenseMatrix x = (1.0 / nb.alpha) * a;
  const double tol = std::cbrt(kUnitRoundoff);
  constexpr int kMaxIter = 50;
  for (int k = 0; k < kMaxIter; ++k) {
    const ZolotarevParams params = zolotarev_coeffs(ell, 1);
    const double ell_used = ell;
    DenseMatrix xnext =
        pseudosymmetrize(mode == DwhMode::ldl ? zolo_step_ldl(x, sigma, params)
                                              : zolo_step_hr(x, sigma, params),
                         sigma);
    const double diff = frobenius_norm(xnext - x) / frobenius_norm(xnext);
    ell = std::min(ell_update(params), 1.0 - 1e-16);
    res.trace.push_back({diff, ell});
    x = std::move(xnext);
    ++res.iterations;
    if (ell_used >= 1.0 - 1e-12 && diff <= tol) {
      res.s = std::move(x);
      return res;
    }
  }
  throw_error(Errc::no_convergence, "sign_sigma_dwh: no convergence in 50 iterations");
}

SignResult sign_zolo_pd(const DenseMatrix& a, const Signature& sigma) {
  require_square(a, sigma, "sign_zolo_pd");
  // definiteness contract checked once up front
  try {
    (void)cholesky(sigma_left(sigma, a));
  } catch (const Error& e) {
    if (e.code() == Errc::not_positive_definite)
      throw_error(Errc::not_definite, "sign_zolo_pd: sigma*A not positive definite");
    throw;
  }

  SignResult res;
  res.method = SignMethod::zolo_pd;
  DenseMatrix work = a;
  constexpr int kMaxRestarts = 3;
  for (int restart = 0; restart <= kMaxRestarts; ++restart) {
    const NormBounds nb = norm_bounds(work, sigma);
    const double ell0 = std::clamp(nb.beta / nb.alpha, 1e-16, 1.0 - 1e-15);
    const int r = choose_rank(ell0);

    DenseMatrix x0 = (1.0 / nb.alpha) * work;
    const ZolotarevParams p1 = zolotarev_coeffs(ell0, r);
    DenseMatrix x1 = pseudosymmetrize(zolo_step_hr(x0, sigma, p1), sigma);
    const double ell1 = std::min(ell_update(p1), 1.0 - 1e-16);
    res.trace.push_back({frobenius_norm(x1 - x0) / frobenius_norm(x1), ell1});

    const ZolotarevParams p2 = zolotarev_coeffs(ell1, r);
    DenseMatrix x2 = pseudosymmetrize(zolo_step_ldl(x1, sigma, p2), sigma);
    const double diff = frobenius_norm(x2 - x1) / frobenius_norm(x2);
    res.trace.push_back({diff, std::min(ell_update(p2), 1.0)});
    res.iterations += 2;

    // Movement test with the convergence rate 2r+1. Pre-asymptotically the
    // first iterate still carries the full equioscillation error (1 - ell_1),
    // so the movement alone over-rejects; X2 is then accepted on a direct
    // idempotency check instead, which is the failure mode the safeguard
    // exists to catch.
    if (diff <= std::pow(kUnitRoundoff, 1.0 / (2 * r + 1))) {
      res.s = std::move(x2);
      return res;
    }
    const int n = x2.rows();
    DenseMatrix s2 = kernels::multiply(x2, x2);
    add_diagonal(s2, -1.0);
    if (frobenius_norm(s2) / std::sqrt(double(n)) <= 1e-8) {
      res.s = std::move(x2);
      return res;
    }
    work = std::move(x2);
  }
  throw_error(Errc::no_convergence, "sign_zolo_pd: no convergence after restarts");
}

SignResult compute_sign(const DenseMatrix& a, const Signature& sigma,
                        SignMethod method) {
  switch (method) {
    case SignMethod::newton: return sign_newton(a, sigma);
    case SignMethod::sigma_dwh_ldl: return sign_sigma_dwh(a, sigma, DwhMode::ldl);
    case SignMethod::sigma_dwh_ldliqr2:
      return sign_sigma_dwh(a, sigma, DwhMode::ldliqr2);
    case SignMethod::zolo_pd: return sign_zolo_pd(a, sigma);
  }
  throw_error(Errc::invalid_argument, "compute_sign: unknown method");
}

}  // namespace psdc
