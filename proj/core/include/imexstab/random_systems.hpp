#pragma once

#include "imexstab/system.hpp"

#include <cstdint>
#include <random>

namespace imexstab {

/// Seeded generators of matrices and systems that satisfy the structural
/// conditions exactly in storage: symmetric matrices are bit-symmetric and
/// skew matrices bit-skew.
class RandomMatrixSource {
 public:
  explicit RandomMatrixSource(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  /// 10^U(lo_exp, hi_exp).
  double log_uniform(double lo_exp, double hi_exp);
  int integer(int lo, int hi);
  Vector normal_vector(Index n);
  /// G G^T / n with G of size n x rank; rank 0 gives the zero matrix.
  DenseMatrix psd(Index n, Index rank);
  /// (K - K^T)/2 with K standard normal.
  DenseMatrix skew(Index n);

 private:
  std::mt19937_64 rng_;
};

struct RandomSystemOptions {
  Index min_dim = 2;
  Index max_dim = 50;
  bool state_dependent_b = false;
  /// Smooth nonzero f(t) (sinusoids plus a constant) instead of f = 0.
  bool smooth_forcing = false;
};

/// A = s (C~ + Q + d I), C = s C~ with C~, Q random PSD of random rank,
/// d in [1e-2, 1], scale s log-uniform in [1e-1, 1e1]; B constant or
/// B(u) = B0 + (w.u) B1 with B0, B1 random skew. A - C = s(Q + d I) is PD.
OdeSystem random_validated_system(std::uint64_t seed, const RandomSystemOptions& options = {});

/// D1, D2 symmetric PD with D1 - D2 PSD (D1 = Q + D2), D3 skew.
struct ContractionTriple {
  DenseMatrix d1;
  DenseMatrix d2;
  DenseMatrix d3;
};
ContractionTriple random_contraction_triple(std::uint64_t seed, Index min_dim = 2,
                                            Index max_dim = 30);

}  // namespace imexstab
