#pragma once

#include "psdc/matrix.hpp"

namespace psdc::kernels {

// Runtime switch between the OpenMP kernels and the serial reference path.
// Both paths accumulate in the same order, so results are bitwise identical;
// the serial path is kept as the reference implementation for tests and for
// the kernel benchmark.
bool parallel_enabled() noexcept;
void set_parallel(bool on) noexcept;

// C = A * B (blocked, OpenMP over row blocks)
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
// plain triple-loop reference
DenseMatrix multiply_serial(const DenseMatrix& a, const DenseMatrix& b);

// C = A^T * B and C = A * B^T (implemented via explicit transposition)
DenseMatrix multiply_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply_nt(const DenseMatrix& a, const DenseMatrix& b);

// Symmetric Gram product A^T * diag(sigma) * A; result is exactly symmetric.
DenseMatrix gram_sigma(const DenseMatrix& a, const Signature& sigma);

// y = A * x
std::vector<double> multiply_vec(const DenseMatrix& a, const std::vector<double>& x);

// In-place triangular solves with a unit lower-triangular L.
//   L X = B        -> solve_unit_lower_inplace
//   L^T X = B      -> solve_unit_lower_transposed_inplace
// X overwrites B.
void solve_unit_lower_inplace(const DenseMatrix& l, DenseMatrix& b);
void solve_unit_lower_transposed_inplace(const DenseMatrix& l, DenseMatrix& b);

// In-place solves with a general (non-unit) lower-triangular L.
void solve_lower_inplace(const DenseMatrix& l, DenseMatrix& b);
void solve_lower_transposed_inplace(const DenseMatrix& l, DenseMatrix& b);

// X L^T = B for unit lower L, i.e. right-division; X overwrites B.
void solve_unit_lower_transposed_right_inplace(const DenseMatrix& l, DenseMatrix& b);
// X L^T = B for general lower L.
void solve_lower_transposed_right_inplace(const DenseMatrix& l, DenseMatrix& b);

}  // namespace psdc::kernels
