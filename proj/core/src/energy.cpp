#include "imexstab/energy.hpp"

#include "imexstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace imexstab {

namespace {

void check_dim(const EnergyMetric& m, const Vector& u) {
  if (u.size() != m.dim()) {
    throw StructuralError("energy metric of dimension " + std::to_string(m.dim()) +
                          " applied to vector of size " + std::to_string(u.size()));
  }
}

}  // namespace

EnergyMetric::EnergyMetric(LinearOperator c, double k)
    : EnergyMetric(c, k, symmetric_eigen_range(c.to_dense())) {}

EnergyMetric::EnergyMetric(LinearOperator c, double k, EigenRange c_spectrum)
    : c_(std::move(c)), k_(k), lambda_min_(c_spectrum.min), lambda_max_(c_spectrum.max) {
  if (!c_.is_square()) {
    throw StructuralError("EnergyMetric: C must be square");
  }
  if (!(k_ > 0) || !std::isfinite(k_)) {
    throw StructuralError("EnergyMetric: timestep must be positive and finite");
  }
  // Roundoff can put the smallest eigenvalue of a singular PSD matrix
  // slightly below zero.
  const double scale = std::max(1.0, std::abs(lambda_max_));
  if (lambda_min_ < -1e-10 * scale) {
    throw StructuralError("EnergyMetric: C has eigenvalue " + std::to_string(lambda_min_) +
                          " < 0");
  }
  lambda_min_ = std::max(lambda_min_, 0.0);
  lambda_max_ = std::max(lambda_max_, lambda_min_);
}

EnergyMetric EnergyMetric::with_timestep(double k) const {
  return EnergyMetric(c_, k, EigenRange{lambda_min_, lambda_max_});
}

double energy_norm(const EnergyMetric& metric, const Vector& u) {
  check_dim(metric, u);
  const double uu = u.squaredNorm();
  const double radicand = uu + metric.k() * u.dot(metric.c().apply(u));
  if (radicand < 0.0) {
    if (radicand < -1e-14 * uu) {
      throw StructuralError("energy_norm: negative radicand, C is not positive semidefinite");
    }
    return 0.0;
  }
  return std::sqrt(radicand);
}

double energy_inner(const EnergyMetric& metric, const Vector& u, const Vector& v) {
  check_dim(metric, u);
  check_dim(metric, v);
  return v.dot(u) + metric.k() * v.dot(metric.c().apply(u));
}

std::pair<double, double> norm_equivalence_bounds(const EnergyMetric& metric) {
  return {std::sqrt(1.0 + metric.k() * metric.lambda_min_c()),
          std::sqrt(1.0 + metric.k() * metric.lambda_max_c())};
}

double energy_operator_norm_bound(const EnergyMetric& metric, double two_norm) {
  return two_norm * std::sqrt(1.0 + metric.k() * metric.lambda_max_c());
}

}  // namespace imexstab
