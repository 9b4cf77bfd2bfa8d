#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psdc/factor.hpp"
#include "psdc/gen.hpp"
#include "psdc/kernels.hpp"
#include "test_support.hpp"

using namespace psdc;

TEST_CASE("random_orthogonal sizes and determinism") {
  {
    const DenseMatrix q = gen::random_orthogonal(1, 3);
    CHECK(std::fabs(std::fabs(q(0, 0)) - 1.0) < 1e-15);
  }
  {
    const int n = 200;
    const DenseMatrix q = gen::random_orthogonal(n, 11);
    const DenseMatrix g = kernels::multiply_tn(q, q);
    CHECK(frobenius_norm(g - DenseMatrix::identity(n)) < 1e-12);
  }
  {
    const DenseMatrix a = gen::random_orthogonal(40, 5);
    const DenseMatrix b = gen::random_orthogonal(40, 5);
    CHECK(max_abs(a - b) == 0.0);  // bitwise determinism
  }
}

TEST_CASE("random_definite_pseudosym structure") {
  gen::GeneratorSpec spec;
  spec.n = 60;
  spec.kappa = 1e3;
  spec.seed = 9;
  const auto g = gen::random_definite_pseudosym(spec);
  CHECK(is_pseudosymmetric(g.a, g.sigma, 1e-10 * frobenius_norm(g.a)));
  CHECK_NOTHROW(cholesky(sigma_left(g.sigma, g.a)));  // sigma*A SPD

  // determinism
  const auto g2 = gen::random_definite_pseudosym(spec);
  CHECK(max_abs(g.a - g2.a) == 0.0);

  // eigenvalue signs split p/q
  const std::vector<double> lam = gen::pencil_oracle(g.a, g.sigma);
  int pos = 0;
  for (double v : lam)
    if (v > 0) ++pos;
  CHECK(pos == g.sigma.count_plus());
}

TEST_CASE("random_definite_pseudosym kappa = 1 degenerates to sigma") {
  gen::GeneratorSpec spec;
  spec.n = 12;
  spec.kappa = 1.0;
  spec.seed = 4;
  const auto g = gen::random_definite_pseudosym(spec);
  // A = sigma Q Q^T = sigma
  DenseMatrix sig(spec.n, spec.n, 0.0);
  for (int i = 0; i < spec.n; ++i) sig(i, i) = g.sigma[i];
  CHECK(frobenius_norm(g.a - sig) < 1e-13 * spec.n);
}

TEST_CASE("random_definite_pseudosym condition number is exact") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    gen::GeneratorSpec spec;
    spec.n = 40;
    spec.kappa = 1e5;
    spec.seed = seed;
    const auto g = gen::random_definite_pseudosym(spec);
    // singular values are the diagonal of D; sigma_max via the largest
    // eigenvalue of A^T A and sigma_min via the largest of A^{-T} A^{-1}
    // (the top eigenvalue of a PSD Gram matrix carries full accuracy,
    // while the bottom of A^T A would lose half the digits)
    const DenseMatrix ata = kernels::multiply_tn(g.a, g.a);
    double smax = 0.0;
    for (double v : sym_eig_jacobi(ata).lambda) smax = std::max(smax, std::sqrt(v));
    const LdlFactorization f = ldl_bunch_kaufman(sigma_left(g.sigma, g.a));
    DenseMatrix rhs(spec.n, spec.n, 0.0);
    for (int i = 0; i < spec.n; ++i) rhs(i, i) = g.sigma[i];
    const DenseMatrix ainv = ldl_solve(f, rhs);  // (sigma A)^{-1} sigma
    const DenseMatrix gram_inv = kernels::multiply_tn(ainv, ainv);
    double inv_max = 0.0;
    for (double v : sym_eig_jacobi(gram_inv).lambda)
      inv_max = std::max(inv_max, v);
    const double smin = 1.0 / std::sqrt(inv_max);
    CHECK(smax / smin == doctest::Approx(spec.kappa).epsilon(1e-10));
  }
}

TEST_CASE("casida_like decoupled case has paired spectrum of A") {
  const auto g = gen::casida_like(6, 77, 0.3, /*coupling=*/0.0);
  const int n = 6;
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g.a(i, j);
  const JacobiEig e = sym_eig_jacobi(a);
  std::vector<double> expected;
  for (double v : e.lambda) {
    expected.push_back(v);
    expected.push_back(-v);
  }
  std::sort(expected.begin(), expected.end(), std::greater<double>());
  const std::vector<double> lam = gen::pencil_oracle(g.a, g.sigma);
  for (size_t i = 0; i < lam.size(); ++i)
    CHECK(lam[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("casida_like is definite for all seeds") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen::casida_like(10, seed, 0.05);
    CHECK_NOTHROW(cholesky(sigma_left(g.sigma, g.a)));
    CHECK(is_pseudosymmetric(g.a, g.sigma, 1e-12 * frobenius_norm(g.a)));
  }
}

TEST_CASE("casida_like spectrum comes in plus-minus pairs") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = gen::casida_like(8, 100 + seed, 0.2);
    const std::vector<double> lam = gen::pencil_oracle(g.a, g.sigma);
    const int n = int(lam.size());
    for (int i = 0; i < n / 2; ++i)
      CHECK(lam[i] == doctest::Approx(-lam[n - 1 - i]).epsilon(1e-8));
  }
}

TEST_CASE("random_sigma_orthogonal preserves the scalar product") {
  gen::SplitMix64 rng(1);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 20;
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = rng.next_double() < 0.5 ? 1.0 : -1.0;
    const Signature sigma(s);
    const DenseMatrix v = gen::random_sigma_orthogonal(n, sigma, seed);
    const DenseMatrix g = kernels::gram_sigma(v, sigma);
    DenseMatrix sig(n, n, 0.0);
    for (int i = 0; i < n; ++i) sig(i, i) = sigma[i];
    CHECK(frobenius_norm(g - sig) < 1e-11);
  }
}

TEST_CASE("random_pseudosymmetric hits the prescribed spectrum") {
  const int n = 16;
  const Signature sigma = Signature::plus_minus(9, 7);
  std::vector<double> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = (i % 2 == 0 ? 1.0 : -1.0) * (i + 1);
  const DenseMatrix a = gen::random_pseudosymmetric(eigs, sigma, 123);
  CHECK(is_pseudosymmetric(a, sigma, 1e-10 * frobenius_norm(a)));
  // trace equals the eigenvalue sum
  double esum = 0.0;
  for (double v : eigs) esum += v;
  CHECK(trace(a) == doctest::Approx(esum).epsilon(1e-10));
}

TEST_CASE("generate dispatches random_signature with mixed spectrum") {
  gen::GeneratorSpec spec;
  spec.n = 14;
  spec.kappa = 50.0;
  spec.seed = 3;
  spec.kind = gen::Kind::random_signature;
  const auto g = gen::generate(spec);
  CHECK(is_pseudosymmetric(g.a, g.sigma, 1e-10 * frobenius_norm(g.a)));
  // not definite: sigma*A has at least one negative eigenvalue
  CHECK_THROWS_AS(gen::pencil_oracle(g.a, g.sigma), Error);
}

TEST_CASE("pencil_oracle diagonal case and definiteness check") {
  const Signature sigma(std::vector<double>{1.0, -1.0, 1.0});
  const DenseMatrix a =
      sigma_left(sigma, DenseMatrix::diagonal({3.0, 2.0, 0.5}));
  const std::vector<double> lam = gen::pencil_oracle(a, sigma);
  CHECK(lam[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(lam[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lam[2] == doctest::Approx(-2.0).epsilon(1e-12));

  CHECK_THROWS_AS(gen::pencil_oracle(DenseMatrix::diagonal({1.0, -1.0}),
                                     Signature::all_plus(2)),
                  Error);
}

TEST_CASE("generator input validation") {
  gen::GeneratorSpec spec;
  spec.n = 1;
  CHECK_THROWS_AS(gen::generate(spec), Error);
  spec.n = 4;
  spec.kappa = 0.5;
  CHECK_THROWS_AS(gen::generate(spec), Error);
  CHECK_THROWS_AS(gen::casida_like(0, 1, 1.0), Error);
  CHECK_THROWS_AS(gen::casida_like(3, 1, 0.0), Error);
}
