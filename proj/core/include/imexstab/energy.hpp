#pragma once

#include "imexstab/linear_operator.hpp"

#include <utility>

namespace imexstab {

/// ||u||_E^2 = u^T u + k u^T C u, with inner product <u,v>_E = v^T (I + kC) u.
///
/// Only mat-vecs with C are used; (I + kC)^{1/2} is never formed here. The
/// extreme eigenvalues of C are computed once on construction (dense
/// symmetric eigensolve) unless supplied.
class EnergyMetric {
 public:
  EnergyMetric(LinearOperator c, double k);
  /// Uses precomputed eigenvalue bounds of C instead of an eigensolve.
  EnergyMetric(LinearOperator c, double k, EigenRange c_spectrum);

  const LinearOperator& c() const noexcept { return c_; }
  double k() const noexcept { return k_; }
  double lambda_min_c() const noexcept { return lambda_min_; }
  double lambda_max_c() const noexcept { return lambda_max_; }
  Index dim() const noexcept { return c_.rows(); }

  /// Same C and spectrum, different timestep.
  EnergyMetric with_timestep(double k) const;

 private:
  LinearOperator c_;
  double k_;
  double lambda_min_;
  double lambda_max_;
};

/// sqrt(u^T u + k u^T C u). Throws StructuralError if the radicand is
/// below -1e-14 ||u||_2^2 (C not PSD); smaller negative values clamp to 0.
double energy_norm(const EnergyMetric& metric, const Vector& u);

/// v^T (I + kC) u.
double energy_inner(const EnergyMetric& metric, const Vector& u, const Vector& v);

/// (sqrt(1 + k lambda_min(C)), sqrt(1 + k lambda_max(C))), so that
/// lo ||u||_2 <= ||u||_E <= hi ||u||_2.
std::pair<double, double> norm_equivalence_bounds(const EnergyMetric& metric);

/// ||M||_2 sqrt(1 + k lambda_max(C)), the induced energy-norm bound used for
/// the W_n and dB/dt terms of the convergence estimate.
double energy_operator_norm_bound(const EnergyMetric& metric, double two_norm);

}  // namespace imexstab
