#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psdc/dnc.hpp"
#include "psdc/factor.hpp"
#include "psdc/gen.hpp"
#include "psdc/kernels.hpp"
#include "test_support.hpp"

using namespace psdc;
using testsup::from_rows;

namespace {

gen::Generated definite_ensemble(int n, double kappa, uint64_t seed) {
  gen::GeneratorSpec spec;
  spec.n = n;
  spec.kappa = kappa;
  spec.seed = seed;
  return gen::random_definite_pseudosym(spec);
}

}  // namespace

TEST_CASE("spectral_divide 2x2 diagonal") {
  const Signature sigma(std::vector<double>{1.0, -1.0});
  const DenseMatrix a = DenseMatrix::diagonal({4.0, -1.0});
  DivideOptions opt;
  opt.method = SignMethod::newton;
  opt.basis = BasisMethod::ldl;
  opt.definite = true;
  const DivisionResult d = spectral_divide(a, sigma, opt);
  CHECK(d.a11.rows() == 1);
  CHECK(d.a11(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(d.a22(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(d.sigma_plus[0] == 1.0);
  CHECK(d.sigma_minus[0] == -1.0);
  CHECK(d.backward_error < 1e-14);
}

TEST_CASE("spectral_divide decouples a definite input into definite blocks") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = definite_ensemble(50, 1e4, 60 + seed);
    DivideOptions opt;
    opt.method = SignMethod::zolo_pd;
    opt.basis = BasisMethod::ldl;
    opt.definite = true;
    const DivisionResult d = spectral_divide(g.a, g.sigma, opt);
    // A11 SPD and A22 negative definite
    CHECK_NOTHROW(cholesky(symmetrize(d.a11)));
    CHECK_NOTHROW(cholesky(symmetrize(-1.0 * d.a22)));
    // pseudosymmetry preserved in the blocks
    CHECK(pseudosymmetry_defect(d.a11, d.sigma_plus) <=
          1e-8 * frobenius_norm(d.a11));
    CHECK(pseudosymmetry_defect(d.a22, d.sigma_minus) <=
          1e-8 * frobenius_norm(d.a22));
    CHECK(d.backward_error <= 1e-10);
  }
}

TEST_CASE("spectral_divide reports a degenerate split") {
  // all eigenvalues positive, sigma = I, shift 0
  const DenseMatrix a = testsup::random_spd(12, 5);
  DivideOptions opt;
  opt.method = SignMethod::newton;
  opt.basis = BasisMethod::chol;
  CHECK_THROWS_AS(spectral_divide(a, Signature::all_plus(12), opt), Error);
  try {
    spectral_divide(a, Signature::all_plus(12), opt);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::split_degenerate);
  }
}

TEST_CASE("spectral_divide with shift splits a symmetric spectrum") {
  // generic orientation: coordinate-aligned eigenvectors are the documented
  // breakdown case of the unpivoted Cholesky extraction
  const DenseMatrix q = gen::random_orthogonal(4, 12);
  DenseMatrix qd = q;
  const double evals[4] = {1.0, 2.0, 3.0, 4.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) qd(i, j) *= evals[j];
  const DenseMatrix a = symmetrize(kernels::multiply_nt(qd, q));
  DivideOptions opt;
  opt.method = SignMethod::newton;
  opt.basis = BasisMethod::chol;
  opt.shift = 2.5;
  const DivisionResult d = spectral_divide(a, Signature::all_plus(4), opt);
  CHECK(d.basis.r_plus == 2);
  // eigenvalues of a11 are {3, 4}
  const JacobiEig e = sym_eig_jacobi(symmetrize(d.a11));
  std::vector<double> lam = e.lambda;
  std::sort(lam.begin(), lam.end());
  CHECK(lam[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(lam[1] == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("solve_definite diagonal case") {
  const Signature sigma(std::vector<double>{1.0, -1.0, 1.0});
  const DenseMatrix a = sigma_left(sigma, DenseMatrix::diagonal({2.0, 3.0, 5.0}));
  const EigenDecomposition e = solve_definite(a, sigma, SignMethod::newton);
  REQUIRE(e.eigenvalues.size() == 3);
  CHECK(e.eigenvalues[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.eigenvalues[2] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(e.residual < 1e-12);
}

TEST_CASE("solve_definite matches the pencil oracle") {
  const auto g = definite_ensemble(50, 1e3, 70);
  const EigenDecomposition e = solve_definite(g.a, g.sigma);
  const std::vector<double> oracle = gen::pencil_oracle(g.a, g.sigma);
  REQUIRE(e.eigenvalues.size() == oracle.size());
  for (size_t i = 0; i < oracle.size(); ++i)
    CHECK(e.eigenvalues[i] ==
          doctest::Approx(oracle[i]).epsilon(1e-10));
  CHECK(e.residual <= 1e-8);
  CHECK(e.orthogonality_defect <= 1e-8 * 50);
  // exactly p positive eigenvalues, sorted descending
  int pos = 0;
  for (double v : e.eigenvalues)
    if (v > 0) ++pos;
  CHECK(pos == g.sigma.count_plus());
}

TEST_CASE("solve_definite rejects indefinite input") {
  const Signature sigma = Signature::all_plus(2);
  CHECK_THROWS_AS(solve_definite(DenseMatrix::diagonal({1.0, -1.0}), sigma), Error);
}

TEST_CASE("solve_definite on a casida-like matrix gives paired spectrum") {
  const auto g = gen::casida_like(10, 5, 0.4);
  const EigenDecomposition e = solve_definite(g.a, g.sigma);
  const int n = int(e.eigenvalues.size());
  for (int i = 0; i < n / 2; ++i)
    CHECK(e.eigenvalues[i] ==
          doctest::Approx(-e.eigenvalues[n - 1 - i]).epsilon(1e-8));
}

TEST_CASE("solve_definite with uniform signature falls through to jacobi") {
  const DenseMatrix a = testsup::random_spd(16, 9);
  const EigenDecomposition e = solve_definite(a, Signature::all_plus(16));
  const JacobiEig j = sym_eig_jacobi(a);
  std::vector<double> lam = j.lambda;
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  for (int i = 0; i < 16; ++i)
    CHECK(e.eigenvalues[i] == doctest::Approx(lam[i]).epsilon(1e-12));
}

TEST_CASE("select_shift ladder") {
  const DenseMatrix a = DenseMatrix::diagonal({1.0, 3.0});
  const Signature sigma = Signature::all_plus(2);
  CHECK(select_shift(a, sigma, 0) == doctest::Approx(2.0));
  const double s1 = select_shift(a, sigma, 1);
  const double s2 = select_shift(a, sigma, 2);
  CHECK(s1 < 2.0);   // odd attempts step down
  CHECK(s2 > 2.0);   // even attempts step up
  CHECK(std::fabs(s2 - 2.0) > std::fabs(s1 - 2.0));
}

TEST_CASE("solve_recursive base cases") {
  {
    const EigenDecomposition e =
        solve_recursive(DenseMatrix(1, 1, 7.5), Signature::all_plus(1));
    CHECK(e.eigenvalues[0] == 7.5);
    CHECK(e.v(0, 0) == 1.0);
  }
  {
    // sigma = I symmetric input matches jacobi
    const DenseMatrix a = testsup::random_symmetric(20, 3);
    const EigenDecomposition e = solve_recursive(a, Signature::all_plus(20));
    const JacobiEig j = sym_eig_jacobi(a);
    std::vector<double> lam = j.lambda;
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    for (int i = 0; i < 20; ++i)
      CHECK(e.eigenvalues[i] == doctest::Approx(lam[i]).epsilon(1e-10));
  }
}

TEST_CASE("solve_recursive agrees with solve_definite on definite input") {
  const auto g = definite_ensemble(40, 1e3, 80);
  RecursiveConfig config;
  config.method = SignMethod::newton;
  const EigenDecomposition er = solve_recursive(g.a, g.sigma, config);
  const EigenDecomposition ed = solve_definite(g.a, g.sigma);
  REQUIRE(er.eigenvalues.size() == ed.eigenvalues.size());
  for (size_t i = 0; i < er.eigenvalues.size(); ++i)
    CHECK(er.eigenvalues[i] ==
          doctest::Approx(ed.eigenvalues[i]).epsilon(1e-9));
  CHECK(er.residual <= 1e-8);
}

TEST_CASE("solve_recursive on an indefinite matrix with known spectrum") {
  const int n = 24;
  const Signature sigma = Signature::plus_minus(13, 11);
  std::vector<double> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = (i % 2 == 0 ? 1.0 : -1.0) * (2.0 + i);
  const DenseMatrix a = gen::random_pseudosymmetric(eigs, sigma, 99);
  RecursiveConfig config;
  config.method = SignMethod::newton;
  const EigenDecomposition e = solve_recursive(a, sigma, config);
  std::vector<double> expected = eigs;
  std::sort(expected.begin(), expected.end(), std::greater<double>());
  REQUIRE(e.eigenvalues.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i)
    CHECK(e.eigenvalues[i] == doctest::Approx(expected[i]).epsilon(1e-8));
  CHECK(e.residual <= 1e-8);
  // sigma-orthonormality of the eigenvector matrix
  CHECK(e.orthogonality_defect <= 1e-8 * n);
}

TEST_CASE("eigen residual and orthogonality across sign methods") {
  for (SignMethod m : {SignMethod::newton, SignMethod::sigma_dwh_ldliqr2,
                       SignMethod::zolo_pd}) {
    const auto g = definite_ensemble(64, 1e8, 90);
    const EigenDecomposition e = solve_definite(g.a, g.sigma, m);
    CHECK(e.residual <= 1e-8 * std::sqrt(64.0));
    CHECK(e.orthogonality_defect <= 1e-8 * 64);
  }
}
