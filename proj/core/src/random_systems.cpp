#include "imexstab/random_systems.hpp"

#include <cmath>

namespace imexstab {

double RandomMatrixSource::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

double RandomMatrixSource::log_uniform(double lo_exp, double hi_exp) {
  return std::pow(10.0, uniform(lo_exp, hi_exp));
}

int RandomMatrixSource::integer(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

Vector RandomMatrixSource::normal_vector(Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = normal(rng_);
  }
  return v;
}

DenseMatrix RandomMatrixSource::psd(Index n, Index rank) {
  if (rank == 0) {
    return DenseMatrix::Zero(n, n);
  }
  DenseMatrix g(n, rank);
  for (Index j = 0; j < rank; ++j) {
    g.col(j) = normal_vector(n);
  }
  const DenseMatrix p = g * g.transpose() / static_cast<double>(n);
  return 0.5 * (p + p.transpose());
}

DenseMatrix RandomMatrixSource::skew(Index n) {
  DenseMatrix k(n, n);
  for (Index j = 0; j < n; ++j) {
    k.col(j) = normal_vector(n);
  }
  return 0.5 * (k - k.transpose());
}

OdeSystem random_validated_system(std::uint64_t seed, const RandomSystemOptions& options) {
  RandomMatrixSource src(seed);
  const Index n = src.integer(static_cast<int>(options.min_dim), static_cast<int>(options.max_dim));
  const double scale = src.log_uniform(-1.0, 1.0);
  const DenseMatrix c_tilde = src.psd(n, src.integer(0, static_cast<int>(n)));
  const DenseMatrix q = src.psd(n, src.integer(0, static_cast<int>(n)));
  const double shift = src.uniform(1e-2, 1.0);

  DenseMatrix c = scale * c_tilde;
  DenseMatrix a = scale * (c_tilde + q + shift * DenseMatrix::Identity(n, n));

  const double b_scale = src.log_uniform(-1.0, 1.0);
  const DenseMatrix b0 = b_scale * src.skew(n);
  SkewField b = SkewField::constant(LinearOperator::dense(b0));
  if (options.state_dependent_b) {
    const DenseMatrix b1 = b_scale * src.skew(n);
    const Vector w = src.normal_vector(n) / std::sqrt(static_cast<double>(n));
    b = SkewField::state_dependent(n, [b0, b1, w](const Vector& u) {
      return LinearOperator::dense(b0 + w.dot(u) * b1);
    });
  }

  Vector u0 = src.normal_vector(n);
  Forcing f = zero_forcing(n);
  if (options.smooth_forcing) {
    const Vector v1 = src.normal_vector(n);
    const Vector v2 = src.normal_vector(n);
    const Vector v3 = src.normal_vector(n);
    const double omega = src.uniform(0.5, 5.0);
    f = [v1, v2, v3, omega](double t) {
      return (std::sin(omega * t) * v1 + std::cos(t) * v2 + v3).eval();
    };
  }
  return OdeSystem(LinearOperator::dense(std::move(a)), std::move(b),
                   LinearOperator::dense(std::move(c)), std::move(f), std::move(u0));
}

ContractionTriple random_contraction_triple(std::uint64_t seed, Index min_dim, Index max_dim) {
  RandomMatrixSource src(seed);
  const Index n = src.integer(static_cast<int>(min_dim), static_cast<int>(max_dim));
  DenseMatrix d2 = src.psd(n, n) + src.uniform(1e-3, 1.0) * DenseMatrix::Identity(n, n);
  const DenseMatrix q = src.psd(n, src.integer(0, static_cast<int>(n)));
  DenseMatrix d1 = q + d2;
  DenseMatrix d3 = src.log_uniform(-2.0, 2.0) * src.skew(n);
  return {std::move(d1), std::move(d2), std::move(d3)};
}

}  // namespace imexstab
