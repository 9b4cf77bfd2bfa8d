#include "psdc/gen.hpp"

#include <algorithm>
#include <cmath>

#include "psdc/factor.hpp"
#include "psdc/kernels.hpp"

namespace psdc::gen {

double SplitMix64::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

DenseMatrix random_orthogonal(int n, uint64_t seed) {
  if (n < 1) throw_error(Errc::invalid_argument, "random_orthogonal: n >= 1");
  SplitMix64 rng(seed);
  DenseMatrix q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = rng.next_normal();

  // modified Gram-Schmidt on columns, run twice
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < j; ++k) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += q(i, k) * q(i, j);
        for (int i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
      }
      double norm = 0.0;
      for (int i = 0; i < n; ++i) norm += q(i, j) * q(i, j);
      norm = std::sqrt(norm);
      if (norm == 0.0)
        throw_error(Errc::singular, "random_orthogonal: degenerate column");
      for (int i = 0; i < n; ++i) q(i, j) /= norm;
    }
  }
  require_finite(q, "random_orthogonal");
  return q;
}

namespace {
Signature fair_coin_signature(int n, SplitMix64& rng) {
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = rng.next_double() < 0.5 ? 1.0 : -1.0;
  return Signature(std::move(s));
}
}  // namespace

Generated random_definite_pseudosym(const GeneratorSpec& spec) {
  const int n = spec.n;
  if (n < 2) throw_error(Errc::invalid_argument, "generator: n >= 2");
  if (!(spec.kappa >= 1.0))
    throw_error(Errc::invalid_argument, "generator: kappa >= 1");
  SplitMix64 rng(spec.seed);
  Signature sigma = fair_coin_signature(n, rng);

  const DenseMatrix q = random_orthogonal(n, rng.next_u64());
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i)
    d[i] = n == 1 ? 1.0 : 1.0 + (spec.kappa - 1.0) * double(i) / double(n - 1);

  // A = sigma Q D Q^T
  DenseMatrix qd = q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) qd(i, j) *= d[j];
  DenseMatrix a = sigma_left(sigma, kernels::multiply_nt(qd, q));
  require_finite(a, "random_definite_pseudosym");
  return Generated{std::move(a), std::move(sigma)};
}

Generated casida_like(int n_half, uint64_t seed, double gap, double coupling) {
  if (n_half < 1) throw_error(Errc::invalid_argument, "casida_like: n_half >= 1");
  if (!(gap > 0.0)) throw_error(Errc::invalid_argument, "casida_like: gap > 0");
  SplitMix64 rng(seed);
  const int n = n_half;

  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.next_normal() / std::sqrt(double(n));
  DenseMatrix a = kernels::multiply_tn(m, m);
  add_diagonal(a, gap);

  DenseMatrix b(n, n, 0.0);
  if (coupling != 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = rng.next_normal();
        b(i, j) = v;
        b(j, i) = v;
      }
    // ||B||_2 <= ||B||_F = coupling * gap / 2 keeps sigma*H positive definite
    const double target = coupling * gap / 2.0;
    const double fnorm = frobenius_norm(b);
    if (fnorm > 0.0) {
      const double s = target / fnorm;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) *= s;
    }
  }

  DenseMatrix h(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h(i, j) = a(i, j);
      h(i, n + j) = b(i, j);
      h(n + i, j) = -b(i, j);
      h(n + i, n + j) = -a(i, j);
    }
  require_finite(h, "casida_like");
  return Generated{std::move(h), Signature::plus_minus(n, n)};
}

DenseMatrix random_sigma_orthogonal(int n, const Signature& sigma, uint64_t seed,
                                    double max_tanh) {
  if (sigma.size() != n)
    throw_error(Errc::invalid_argument, "random_sigma_orthogonal: size mismatch");
  SplitMix64 rng(seed);
  DenseMatrix v = DenseMatrix::identity(n);
  const int n_rot = 4 * n;
  for (int t = 0; t < n_rot; ++t) {
    int i = int(rng.next_u64() % uint64_t(n));
    int j = int(rng.next_u64() % uint64_t(n));
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (sigma[i] == sigma[j]) {
      // plane rotation preserves sigma on a same-sign pair
      const double th = 2.0 * M_PI * rng.next_double();
      const double c = std::cos(th), s = std::sin(th);
      for (int r = 0; r < n; ++r) {
        const double x = v(r, i), y = v(r, j);
        v(r, i) = c * x - s * y;
        v(r, j) = s * x + c * y;
      }
    } else {
      // hyperbolic rotation preserves sigma on an opposite-sign pair;
      // bounded parameter keeps the basis well conditioned
      const double tpar = max_tanh * (2.0 * rng.next_double() - 1.0);
      const double ch = 1.0 / std::sqrt(1.0 - tpar * tpar);
      const double sh = tpar * ch;
      for (int r = 0; r < n; ++r) {
        const double x = v(r, i), y = v(r, j);
        v(r, i) = ch * x + sh * y;
        v(r, j) = sh * x + ch * y;
      }
    }
  }
  require_finite(v, "random_sigma_orthogonal");
  return v;
}

DenseMatrix random_pseudosymmetric(const std::vector<double>& eigs,
                                   const Signature& sigma, uint64_t seed,
                                   double max_tanh) {
  const int n = int(eigs.size());
  const DenseMatrix v = random_sigma_orthogonal(n, sigma, seed, max_tanh);
  // A = V diag(eigs) V^dagger with V^dagger = sigma V^T sigma
  DenseMatrix vd = v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vd(i, j) *= eigs[j];
  const DenseMatrix vdag = sigma_left(sigma, sigma_right(transpose(v), sigma));
  return kernels::multiply(vd, vdag);
}

Generated generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case Kind::random_definite:
      return random_definite_pseudosym(spec);
    case Kind::casida_like: {
      if (spec.n % 2 != 0)
        throw_error(Errc::invalid_argument, "casida_like: n must be even");
      return casida_like(spec.n / 2, spec.seed, spec.gap, spec.coupling);
    }
    case Kind::random_signature: {
      const int n = spec.n;
      if (n < 2) throw_error(Errc::invalid_argument, "generator: n >= 2");
      if (!(spec.kappa >= 1.0))
        throw_error(Errc::invalid_argument, "generator: kappa >= 1");
      SplitMix64 rng(spec.seed);
      Signature sigma = fair_coin_signature(n, rng);
      std::vector<double> eigs(n);
      for (int i = 0; i < n; ++i) {
        const double mag =
            n == 1 ? 1.0 : 1.0 + (spec.kappa - 1.0) * double(i) / double(n - 1);
        eigs[i] = rng.next_double() < 0.5 ? mag : -mag;
      }
      // make sure both half-planes are populated
      eigs[0] = std::fabs(eigs[0]);
      eigs[1] = -std::fabs(eigs[1]);
      DenseMatrix a = random_pseudosymmetric(eigs, sigma, rng.next_u64());
      require_finite(a, "random_signature");
      return Generated{std::move(a), std::move(sigma)};
    }
  }
  throw_error(Errc::invalid_argument, "generate: unknown kind");
}

std::vector<double> pencil_oracle(const DenseMatrix& a, const Signature& sigma) {
  const DenseMatrix sa = sigma_left(sigma, a);
  CholeskyFactor cf = [&] {
    try {
      return cholesky(sa);
    } catch (const Error& e) {
      if (e.code() == Errc::not_positive_definite)
        throw_error(Errc::not_definite, "pencil_oracle: sigma*A not positive definite");
      throw;
    }
  }();
  const int n = a.rows();
  // M = L^{-1} sigma L^{-T}
  DenseMatrix m(n, n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = sigma[i];
  kernels::solve_lower_inplace(cf.l, m);
  kernels::solve_lower_transposed_right_inplace(cf.l, m);
  // enforce symmetry lost to roundoff
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = m(j, i) = v;
    }
  JacobiEig eig = sym_eig_jacobi(m);
  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i) {
    if (eig.lambda[i] == 0.0)
      throw_error(Errc::singular, "pencil_oracle: zero eigenvalue");
    lam[i] = 1.0 / eig.lambda[i];
  }
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return lam;
}

}  // namespace psdc::gen
