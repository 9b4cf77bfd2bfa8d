// Times the OpenMP kernels against the serial reference path.

#include <chrono>
#include <cstdio>
#include <vector>

#include "psdc/factor.hpp"
#include "psdc/gen.hpp"
#include "psdc/kernels.hpp"

using namespace psdc;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename Fn>
double time_ms(Fn&& fn, int reps) {
  fn();  // warm up
  const auto t0 = clock_type::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0)
             .count() /
         reps;
}

DenseMatrix random_square(int n, uint64_t seed) {
  gen::SplitMix64 rng(seed);
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.next_normal();
  return a;
}

}  // namespace

int main() {
  std::printf("%-22s %6s %12s %12s %8s\n", "kernel", "n", "serial_ms",
              "parallel_ms", "speedup");
  for (int n : {128, 256, 512}) {
    const DenseMatrix a = random_square(n, 1);
    const DenseMatrix b = random_square(n, 2);
    const int reps = n <= 256 ? 5 : 3;

    const double t_ser = time_ms(
        [&] { (void)kernels::multiply_serial(a, b); }, reps);
    kernels::set_parallel(true);
    const double t_par = time_ms([&] { (void)kernels::multiply(a, b); }, reps);
    std::printf("%-22s %6d %12.2f %12.2f %7.2fx\n", "multiply", n, t_ser, t_par,
                t_ser / t_par);

    DenseMatrix spd = kernels::multiply_nt(a, a);
    add_diagonal(spd, double(n));
    kernels::set_parallel(false);
    const double c_ser = time_ms([&] { (void)cholesky(spd); }, reps);
    kernels::set_parallel(true);
    const double c_par = time_ms([&] { (void)cholesky(spd); }, reps);
    std::printf("%-22s %6d %12.2f %12.2f %7.2fx\n", "cholesky", n, c_ser, c_par,
                c_ser / c_par);

    const DenseMatrix sym = symmetrize(a);
    kernels::set_parallel(false);
    const double l_ser = time_ms([&] { (void)ldl_bunch_kaufman(sym); }, reps);
    kernels::set_parallel(true);
    const double l_par = time_ms([&] { (void)ldl_bunch_kaufman(sym); }, reps);
    std::printf("%-22s %6d %12.2f %12.2f %7.2fx\n", "ldl_bunch_kaufman", n,
                l_ser, l_par, l_ser / l_par);

    if (n <= 256) {
      kernels::set_parallel(false);
      const double j_ser = time_ms([&] { (void)sym_eig_jacobi(sym); }, 1);
      kernels::set_parallel(true);
      const double j_par = time_ms([&] { (void)sym_eig_jacobi(sym); }, 1);
      std::printf("%-22s %6d %12.2f %12.2f %7.2fx\n", "sym_eig_jacobi", n,
                  j_ser, j_par, j_ser / j_par);
    }
  }
  return 0;
}
