#pragma once

#include <cstdint>
#include <vector>

#include "psdc/matrix.hpp"

namespace psdc::gen {

// SplitMix64. Fixed constants so that ensembles are reproducible across
// platforms and reimplementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller
  double next_normal();

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class Kind { random_definite, random_signature, casida_like };

struct GeneratorSpec {
  int n = 2;
  double kappa = 1.0;
  uint64_t seed = 0;
  Kind kind = Kind::random_definite;
  double gap = 1.0;       // casida_like only
  double coupling = 1.0;  // casida_like only: scales the off-diagonal block
};

struct Generated {
  DenseMatrix a;
  Signature sigma;
};

// Orthonormalization (modified Gram-Schmidt run twice) of a seeded
// standard-normal matrix.
DenseMatrix random_orthogonal(int n, uint64_t seed);

// A = sigma Q D Q^T with D = linspace(1, kappa, n) and fair-coin signature;
// sigma*A is SPD and cond_2(A) = kappa exactly.
Generated random_definite_pseudosym(const GeneratorSpec& spec);

// H = [[A, B], [-B, -A]] with A = M^T M + gap*I and ||B||_2 <= coupling*gap/2,
// sigma = diag(I, -I); sigma*H is SPD and the spectrum comes in +/- pairs.
Generated casida_like(int n_half, uint64_t seed, double gap, double coupling = 1.0);

// V with V^T sigma V = sigma, built from random orthogonal plane rotations
// (same-sign index pairs) and bounded hyperbolic rotations (opposite-sign
// pairs).
DenseMatrix random_sigma_orthogonal(int n, const Signature& sigma, uint64_t seed,
                                    double max_tanh = 0.5);

// A = V diag(eigs) V^{-1} with the V above; pseudosymmetric w.r.t. sigma with
// prescribed spectrum (used for indefinite ensembles and test projectors).
DenseMatrix random_pseudosymmetric(const std::vector<double>& eigs,
                                   const Signature& sigma, uint64_t seed,
                                   double max_tanh = 0.5);

// Dispatch on spec.kind. random_signature draws magnitudes linspace(1, kappa)
// with fair-coin eigenvalue signs and a fair-coin signature.
Generated generate(const GeneratorSpec& spec);

// Reference spectrum of a definite pseudosymmetric matrix: with sigma A = L L^T,
// the eigenvalues of A are the reciprocals of the eigenvalues of L^{-1} sigma
// L^{-T}. Returned in descending order.
std::vector<double> pencil_oracle(const DenseMatrix& a, const Signature& sigma);

}  // namespace psdc::gen
