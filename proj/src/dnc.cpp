#include "psdc/dnc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psdc/factor.hpp"
#include "psdc/kernels.hpp"

namespace psdc {

const char* basis_method_name(BasisMethod b) {
  return b == BasisMethod::chol ? "chol" : "ldl";
}

namespace {

// X^dagger = sigma_hat X^T sigma for a (sigma, sigma_hat)-orthogonal X.
DenseMatrix pseudo_inverse_apply(const DenseMatrix& q, const Signature& sigma,
                                 const std::vector<double>& sigma_hat_part,
                                 const DenseMatrix& aq) {
  // computes sigma_hat Q^T sigma (A Q) without forming the pseudoinverse
  DenseMatrix qs = q;
  for (int i = 0; i < q.rows(); ++i)
    if (sigma[i] < 0) {
      double* r = qs.row(i);
      for (int j = 0; j < q.cols(); ++j) r[j] = -r[j];
    }
  DenseMatrix out = kernels::multiply_tn(qs, aq);
  for (int i = 0; i < out.rows(); ++i)
    if (sigma_hat_part[i] < 0) {
      double* r = out.row(i);
      for (int j = 0; j < out.cols(); ++j) r[j] = -r[j];
    }
  return out;
}

}  // namespace

DivisionResult spectral_divide(const DenseMatrix& a, const Signature& sigma,
                               const DivideOptions& opt) {
  if (!a.square() || sigma.size() != a.rows())
    throw_error(Errc::invalid_argument, "spectral_divide: shape mismatch");
  const int n = a.rows();

  DenseMatrix shifted = a;
  if (opt.shift != 0.0) add_diagonal(shifted, -opt.shift);

  DivisionResult res;
  res.sign_result = compute_sign(shifted, sigma, opt.method);
  const DenseMatrix& s = res.sign_result.s;

  {
    DenseMatrix p_plus = 0.5 * s;
    for (int i = 0; i < n; ++i) p_plus(i, i) += 0.5;
    const int r_plus = rank_from_trace(p_plus);
    if (r_plus == 0 || r_plus == n)
      throw_error(Errc::split_degenerate,
                  "spectral_divide: all eigenvalues on one side of the shift");
  }

  if (opt.definite) {
    res.basis = opt.basis == BasisMethod::chol ? def_basis_chol(s, sigma)
                                               : def_basis_ldl(s, sigma);
  } else if (sigma.uniform()) {
    res.basis = opt.basis == BasisMethod::chol ? orth_basis_chol(s)
                                               : hyp_basis_ldl(s, sigma);
    if (opt.basis == BasisMethod::chol && sigma[0] < 0) {
      // orthogonal basis against sigma = -I: Q^T sigma Q = -I
      res.basis.sigma_hat = Signature(
          std::vector<double>(size_t(n), -1.0));
    }
  } else {
    // no general-signature Cholesky variant exists; def_basis_chol documents
    // breakdown as its contract when the input is not definite
    res.basis = opt.basis == BasisMethod::chol ? def_basis_chol(s, sigma)
                                               : hyp_basis_ldl(s, sigma);
  }

  const SubspaceBasis& b = res.basis;
  std::vector<double> sh_plus(b.sigma_hat.signs().begin(),
                              b.sigma_hat.signs().begin() + b.r_plus);
  std::vector<double> sh_minus(b.sigma_hat.signs().begin() + b.r_plus,
                               b.sigma_hat.signs().end());

  const DenseMatrix aq_plus = kernels::multiply(a, b.q_plus);
  const DenseMatrix aq_minus = kernels::multiply(a, b.q_minus);
  res.a11 = pseudo_inverse_apply(b.q_plus, sigma, sh_plus, aq_plus);
  res.a22 = pseudo_inverse_apply(b.q_minus, sigma, sh_minus, aq_minus);
  res.sigma_plus = Signature(std::move(sh_plus));
  res.sigma_minus = Signature(std::move(sh_minus));

  // off-block coupling left after the division
  const DenseMatrix qsa = kernels::multiply_tn(sigma_left(sigma, b.q_plus), aq_minus);
  res.backward_error = frobenius_norm(qsa) / frobenius_norm(a);
  return res;
}

namespace {

struct EigParts {
  std::vector<double> lambda;
  DenseMatrix v;
  std::vector<double> sigma_hat;
};

EigParts jacobi_parts(const DenseMatrix& a, double sigma_sign) {
  JacobiEig eig = sym_eig_jacobi(a);
  EigParts p;
  p.lambda = std::move(eig.lambda);
  p.v = std::move(eig.q);
  p.sigma_hat.assign(p.lambda.size(), sigma_sign);
  return p;
}

void sort_descending(EigParts& p) {
  const int n = int(p.lambda.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return p.lambda[a] > p.lambda[b]; });
  std::vector<double> lam(n), sh(n);
  DenseMatrix v(p.v.rows(), n);
  for (int c = 0; c < n; ++c) {
    lam[c] = p.lambda[idx[c]];
    sh[c] = p.sigma_hat[idx[c]];
    for (int i = 0; i < p.v.rows(); ++i) v(i, c) = p.v(i, idx[c]);
  }
  p.lambda = std::move(lam);
  p.sigma_hat = std::move(sh);
  p.v = std::move(v);
}

EigenDecomposition finalize(const DenseMatrix& a, const Signature& sigma,
                            EigParts p) {
  sort_descending(p);
  EigenDecomposition out;
  out.eigenvalues = std::move(p.lambda);
  out.v = std::move(p.v);
  out.sigma_hat = Signature(std::move(p.sigma_hat));

  const int n = a.rows();
  DenseMatrix av = kernels::multiply(a, out.v);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) av(i, j) -= out.v(i, j) * out.eigenvalues[j];
  out.residual = frobenius_norm(av) / frobenius_norm(a);

  DenseMatrix g = kernels::gram_sigma(out.v, sigma);
  for (int i = 0; i < n; ++i) g(i, i) -= out.sigma_hat[i];
  out.orthogonality_defect = frobenius_norm(g);
  return out;
}

// columns of [Q1 V1, Q2 V2] with eigenvalue and signature bookkeeping
EigParts assemble(const DenseMatrix& q1, EigParts e1, const DenseMatrix& q2,
                  EigParts e2) {
  EigParts out;
  const int n = q1.rows();
  const int n1 = int(e1.lambda.size());
  const int n2 = int(e2.lambda.size());
  out.lambda = std::move(e1.lambda);
  out.lambda.insert(out.lambda.end(), e2.lambda.begin(), e2.lambda.end());
  out.sigma_hat = std::move(e1.sigma_hat);
  out.sigma_hat.insert(out.sigma_hat.end(), e2.sigma_hat.begin(),
                       e2.sigma_hat.end());
  const DenseMatrix v1 = kernels::multiply(q1, e1.v);
  const DenseMatrix v2 = kernels::multiply(q2, e2.v);
  out.v = DenseMatrix(n, n1 + n2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n1; ++j) out.v(i, j) = v1(i, j);
    for (int j = 0; j < n2; ++j) out.v(i, n1 + j) = v2(i, j);
  }
  return out;
}

}  // namespace

EigenDecomposition solve_definite(const DenseMatrix& a, const Signature& sigma,
                                  SignMethod method) {
  if (!a.square() || sigma.size() != a.rows())
    throw_error(Errc::invalid_argument, "solve_definite: shape mismatch");
  try {
    (void)cholesky(sigma_left(sigma, a));
  } catch (const Error& e) {
    if (e.code() == Errc::not_positive_definite)
      throw_error(Errc::not_definite, "solve_definite: sigma*A not positive definite");
    throw;
  }

  const int p = sigma.count_plus();
  const int n = a.rows();
  if (p == 0 || p == n) {
    // sigma = ±I: A itself is ± definite symmetric
    return finalize(a, sigma, jacobi_parts(a, sigma[0]));
  }

  DivideOptions opt;
  opt.method = method;
  opt.basis = BasisMethod::ldl;
  opt.shift = 0.0;
  opt.definite = true;
  DivisionResult div = spectral_divide(a, sigma, opt);

  // the blocks carry the division error as a symmetry defect; strip it
  // before handing them to the symmetric eigensolver
  EigParts e1 = jacobi_parts(symmetrize(div.a11), 1.0);
  EigParts e2 = jacobi_parts(symmetrize(div.a22), -1.0);
  EigParts all = assemble(div.basis.q_plus, std::move(e1), div.basis.q_minus,
                          std::move(e2));
  return finalize(a, sigma, all);
}

double select_shift(const DenseMatrix& a, const Signature& sigma, int attempt) {
  (void)sigma;
  const int n = a.rows();
  const double base = trace(a) / n;
  if (attempt <= 0) return base;
  const double step = double(attempt) * frobenius_norm(a) / (10.0 * n);
  return base + (attempt % 2 == 0 ? step : -step);
}

namespace {

EigParts solve_recursive_impl(const DenseMatrix& a, const Signature& sigma,
                              const RecursiveConfig& config, int depth,
                              int depth_cap) {
  const int n = a.rows();
  if (n == 1) {
    EigParts p;
    p.lambda = {a(0, 0)};
    p.v = DenseMatrix(1, 1, 1.0);
    p.sigma_hat = {sigma[0]};
    return p;
  }
  if (sigma.uniform()) {
    // symmetric base case
    return jacobi_parts(a, sigma[0]);
  }
  if (depth > depth_cap)
    throw_error(Errc::no_convergence, "solve_recursive: depth cap exceeded");

  DivideOptions opt;
  opt.method = config.method;
  opt.basis = BasisMethod::ldl;
  opt.definite = false;

  DivisionResult div = [&] {
    for (int attempt = 0;; ++attempt) {
      opt.shift = select_shift(a, sigma, attempt);
      try {
        return spectral_divide(a, sigma, opt);
      } catch (const Error& e) {
        const bool retryable = e.code() == Errc::split_degenerate ||
                               e.code() == Errc::singular ||
                               e.code() == Errc::no_convergence;
        if (!retryable || attempt >= config.max_shift_retries) throw;
      }
    }
  }();

  EigParts e1 =
      solve_recursive_impl(pseudosymmetrize(div.a11, div.sigma_plus),
                           div.sigma_plus, config, depth + 1, depth_cap);
  EigParts e2 =
      solve_recursive_impl(pseudosymmetrize(div.a22, div.sigma_minus),
                           div.sigma_minus, config, depth + 1, depth_cap);
  return assemble(div.basis.q_plus, std::move(e1), div.basis.q_minus,
                  std::move(e2));
}

}  // namespace

EigenDecomposition solve_recursive(const DenseMatrix& a, const Signature& sigma,
                                   const RecursiveConfig& config) {
  if (!a.square() || sigma.size() != a.rows())
    throw_error(Errc::invalid_argument, "solve_recursive: shape mismatch");
  const int depth_cap =
      int(2.0 * std::log2(double(std::max(a.rows(), 2))) + 10.0);
  EigParts p = solve_recursive_impl(a, sigma, config, 0, depth_cap);
  return finalize(a, sigma, std::move(p));
}

}  // namespace psdc
