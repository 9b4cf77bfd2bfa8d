#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psdc/factor.hpp"
#include "psdc/gen.hpp"
#include "psdc/kernels.hpp"
#include "test_support.hpp"

using namespace psdc;
using testsup::from_rows;

TEST_CASE("multiply is deterministic across the parallel toggle") {
  gen::SplitMix64 rng(42);
  for (int n : {1, 3, 17, 64, 130}) {
    DenseMatrix a(n, n), b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a(i, j) = rng.next_normal();
        b(i, j) = rng.next_normal();
      }
    const DenseMatrix ref = kernels::multiply_serial(a, b);
    kernels::set_parallel(true);
    const DenseMatrix par = kernels::multiply(a, b);
    kernels::set_parallel(false);
    const DenseMatrix ser = kernels::multiply(a, b);
    kernels::set_parallel(true);
    // the blocked kernel sums each entry in a fixed order regardless of the
    // thread count, so the toggle is bitwise invisible
    CHECK(max_abs(par - ser) == 0.0);
    // the plain-loop reference differs only by summation order
    CHECK(frobenius_norm(par - ref) <=
          1e-13 * frobenius_norm(ref) * std::sqrt(double(n)));
  }
}

TEST_CASE("gram_sigma equals explicit product") {
  gen::SplitMix64 rng(7);
  const int n = 23;
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.next_normal();
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = rng.next_double() < 0.5 ? 1.0 : -1.0;
  const Signature sigma(s);
  const DenseMatrix g = kernels::gram_sigma(a, sigma);
  const DenseMatrix ref = kernels::multiply_tn(a, sigma_left(sigma, a));
  CHECK(testsup::rel_diff(g, ref) < 1e-14);
  CHECK(symmetry_defect(g) == 0.0);
}

TEST_CASE("cholesky identity") {
  const DenseMatrix i3 = DenseMatrix::identity(3);
  const CholeskyFactor cf = cholesky(i3);
  CHECK(max_abs(cf.l - i3) == 0.0);
}

TEST_CASE("cholesky 2x2 by hand") {
  const DenseMatrix a = from_rows({{4, 2}, {2, 5}});
  const CholeskyFactor cf = cholesky(a);
  const DenseMatrix expected = from_rows({{2, 0}, {1, 2}});
  CHECK(max_abs(cf.l - expected) < 1e-15);
}

TEST_CASE("cholesky rejects indefinite input") {
  const DenseMatrix a = from_rows({{1, 2}, {2, 1}});  // eigenvalues 3, -1
  CHECK_THROWS_WITH_AS(cholesky(a), doctest::Contains("pivot"), Error);
  try {
    cholesky(a);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive_definite);
  }
}

TEST_CASE("cholesky rejects asymmetric input") {
  const DenseMatrix a = from_rows({{1, 2}, {0, 1}});
  CHECK_THROWS_AS(cholesky(a), Error);
}

TEST_CASE("ldl diagonal input") {
  const DenseMatrix a = DenseMatrix::diagonal({3.0, -2.0});
  const LdlFactorization f = ldl_bunch_kaufman(a);
  CHECK(f.perm[0] == 0);
  CHECK(f.perm[1] == 1);
  CHECK(max_abs(f.l - DenseMatrix::identity(2)) == 0.0);
  CHECK(f.d[0] == 3.0);
  CHECK(f.d[1] == -2.0);
}

TEST_CASE("ldl zero diagonal forces 2x2 pivot") {
  const DenseMatrix a = from_rows({{0, 1}, {1, 0}});
  const LdlFactorization f = ldl_bunch_kaufman(a);
  REQUIRE(f.block_sizes.size() == 1);
  CHECK(f.block_sizes[0] == 2);
  CHECK(f.d[0] == 0.0);
  CHECK(f.d[1] == 0.0);
  CHECK(f.d_sub[0] == 1.0);
  CHECK(max_abs(f.reconstruct() - a) == 0.0);
}

TEST_CASE("ldl rank-deficient diagonal") {
  const DenseMatrix a = DenseMatrix::diagonal({1.0, 0.0});
  const LdlFactorization f = ldl_bunch_kaufman(a);
  CHECK(f.d[0] == 1.0);
  CHECK(f.d[1] == 0.0);
  CHECK(max_abs(f.l - DenseMatrix::identity(2)) == 0.0);
}

TEST_CASE("ldl factor-reconstruct round trip over random symmetric matrices") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + int(seed % 63);
    const DenseMatrix a = testsup::random_symmetric(n, seed);
    const LdlFactorization f = ldl_bunch_kaufman(a);
    const double err = frobenius_norm(f.reconstruct() - a);
    CHECK(err <= 1e3 * kUnitRoundoff * n * frobenius_norm(a));
  }
}

TEST_CASE("ldl_solve matches dense residual") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 24;
    const DenseMatrix a = testsup::random_symmetric(n, 1000 + seed);
    const LdlFactorization f = ldl_bunch_kaufman(a);
    gen::SplitMix64 rng(seed);
    DenseMatrix b(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = rng.next_normal();
    const DenseMatrix x = ldl_solve(f, b);
    const DenseMatrix r = kernels::multiply(a, x) - b;
    CHECK(frobenius_norm(r) <= 1e-11 * frobenius_norm(b) * n);
  }
}

TEST_CASE("ldl_solve reports singularity") {
  const DenseMatrix a = DenseMatrix::diagonal({1.0, 0.0});
  const LdlFactorization f = ldl_bunch_kaufman(a);
  DenseMatrix b(2, 1, 1.0);
  CHECK_THROWS_AS(ldl_solve(f, b), Error);
}

TEST_CASE("diagonalize_block_diag already diagonal") {
  const LdlFactorization f = ldl_bunch_kaufman(DenseMatrix::diagonal({5.0, -1.0}));
  const BlockDiagEig eig = diagonalize_block_diag(f);
  CHECK(eig.rotations.empty());
  CHECK(eig.d[0] == 5.0);
  CHECK(eig.d[1] == -1.0);
}

TEST_CASE("diagonalize_block_diag 2x2 closed form") {
  const DenseMatrix a = from_rows({{0, 1}, {1, 0}});
  const LdlFactorization f = ldl_bunch_kaufman(a);
  const BlockDiagEig eig = diagonalize_block_diag(f);
  REQUIRE(eig.rotations.size() == 1);
  // eigenvalues {1, -1} in either order
  std::vector<double> d = eig.d;
  std::sort(d.begin(), d.end());
  CHECK(d[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-15));
  // V^T D V = diag(d)
  const DenseMatrix v = eig.dense(2);
  const DenseMatrix vtdv =
      kernels::multiply_tn(v, kernels::multiply(f.d_dense(), v));
  CHECK(std::fabs(vtdv(0, 1)) < 1e-15);
  CHECK(std::fabs(vtdv(0, 0) - eig.d[0]) < 1e-15);
  const double c = eig.rotations[0].c;
  const double s = eig.rotations[0].s;
  CHECK(std::fabs(std::fabs(c) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::fabs(std::fabs(s) - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("diagonalize_block_diag zero block") {
  const LdlFactorization f = ldl_bunch_kaufman(DenseMatrix(2, 2, 0.0));
  const BlockDiagEig eig = diagonalize_block_diag(f);
  CHECK(eig.d[0] == 0.0);
  CHECK(eig.d[1] == 0.0);
  CHECK(eig.rotations.empty());
}

TEST_CASE("inertia of D matches inertia from jacobi") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + int(seed % 31);
    const DenseMatrix a = testsup::random_symmetric(n, 7000 + seed);
    const LdlFactorization f = ldl_bunch_kaufman(a);
    const BlockDiagEig eig = diagonalize_block_diag(f);
    const JacobiEig je = sym_eig_jacobi(a);
    int dp = 0, dm = 0, dz = 0, jp = 0, jm = 0, jz = 0;
    const double tol = n * kUnitRoundoff * frobenius_norm(a);
    for (double v : eig.d) (std::fabs(v) <= tol ? dz : (v > 0 ? dp : dm))++;
    for (double v : je.lambda) (std::fabs(v) <= tol ? jz : (v > 0 ? jp : jm))++;
    CHECK(dp == jp);
    CHECK(dm == jm);
    CHECK(dz == jz);
  }
}

TEST_CASE("jacobi diagonal and zero cases") {
  {
    const JacobiEig e = sym_eig_jacobi(DenseMatrix::diagonal({2.0, 7.0}));
    std::vector<double> l = e.lambda;
    std::sort(l.begin(), l.end());
    CHECK(l[0] == 2.0);
    CHECK(l[1] == 7.0);
  }
  {
    const JacobiEig e = sym_eig_jacobi(DenseMatrix(3, 3, 0.0));
    for (double v : e.lambda) CHECK(v == 0.0);
    CHECK(max_abs(e.q - DenseMatrix::identity(3)) == 0.0);
  }
}

TEST_CASE("jacobi 2x2 characteristic polynomial by hand") {
  const JacobiEig e = sym_eig_jacobi(from_rows({{2, 1}, {1, 2}}));
  std::vector<double> l = e.lambda;
  std::sort(l.begin(), l.end());
  CHECK(l[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("jacobi self-consistency and orthogonality on random inputs") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 5 + int(seed % 40);
    const DenseMatrix a = testsup::random_symmetric(n, 31000 + seed);
    const JacobiEig e = sym_eig_jacobi(a);
    CHECK(testsup::eig_residual(a, e.q, e.lambda) <=
          1e2 * kUnitRoundoff * n * frobenius_norm(a));
    const DenseMatrix qtq = kernels::multiply_tn(e.q, e.q);
    CHECK(frobenius_norm(qtq - DenseMatrix::identity(n)) <=
          1e2 * kUnitRoundoff * n);
  }
}

TEST_CASE("norm_bounds identity") {
  const NormBounds nb = norm_bounds(DenseMatrix::identity(4), Signature::all_plus(4));
  CHECK(nb.alpha >= 1.0);
  CHECK(nb.beta <= 1.0);
  CHECK(nb.alpha / nb.beta <= 4.0);
  CHECK(nb.beta > 0.0);
}

TEST_CASE("norm_bounds diagonal sandwich") {
  const DenseMatrix a = DenseMatrix::diagonal({10.0, 1.0, 0.1});
  const NormBounds nb = norm_bounds(a, Signature::all_plus(3));
  CHECK(nb.alpha >= 10.0);
  CHECK(nb.alpha <= std::sqrt(3.0) * 10.0 + 1e-12);
  CHECK(nb.beta > 0.0);
  CHECK(nb.beta <= 0.1);
}

TEST_CASE("norm_bounds singular input") {
  CHECK_THROWS_AS(norm_bounds(DenseMatrix::diagonal({1.0, 0.0}), Signature::all_plus(2)),
                  Error);
}

TEST_CASE("norm_bounds sandwiches the spectrum of generated matrices") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    gen::GeneratorSpec spec;
    spec.n = 30;
    spec.kappa = 1e4;
    spec.seed = seed;
    const auto g = gen::random_definite_pseudosym(spec);
    const NormBounds nb = norm_bounds(g.a, g.sigma);
    const std::vector<double> lam = gen::pencil_oracle(g.a, g.sigma);
    double lmax = 0.0, lmin = 1e300;
    for (double v : lam) {
      lmax = std::max(lmax, std::fabs(v));
      lmin = std::min(lmin, std::fabs(v));
    }
    CHECK(nb.alpha >= lmax * (1.0 - 1e-12));
    CHECK(nb.beta <= lmin * (1.0 + 1e-12));
  }
}
