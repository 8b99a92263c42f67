#include "imexstab/analysis.hpp"

#include "imexstab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace imexstab {

namespace {

void require_square(const DenseMatrix& m, Index n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw StructuralError(std::string("check_contraction: ") + name + " has the wrong shape");
  }
}

DenseMatrix dense_step_matrix(const OdeSystem& system, double k, const Vector& state) {
  const Index n = system.dim();
  return DenseMatrix::Identity(n, n) + k * system.a().to_dense() +
         k * system.b().at(state).to_dense();
}

DenseMatrix operator_derivative(const SkewField& b, const Vector& lo, const Vector& hi,
                                double spacing) {
  return (b.at(hi).to_dense() - b.at(lo).to_dense()) / spacing;
}

}  // namespace

DenseMatrix symmetric_sqrt(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("symmetric_sqrt: matrix is not square");
  }
  const DenseMatrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw StructuralError("symmetric_sqrt: eigensolver did not converge");
  }
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  DenseMatrix r = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

ContractionWitness check_contraction(const DenseMatrix& d1, const DenseMatrix& d2,
                                     const DenseMatrix& d3, double tol) {
  const Index n = d1.rows();
  require_square(d1, n, "D1");
  require_square(d2, n, "D2");
  require_square(d3, n, "D3");

  const double scale = std::max({1.0, spectral_norm(d1), spectral_norm(d2), spectral_norm(d3)});
  const double thr = tol * scale;
  if (max_asymmetry(d1) > thr) {
    throw StructuralError("check_contraction: D1 is not symmetric");
  }
  if (max_asymmetry(d2) > thr) {
    throw StructuralError("check_contraction: D2 is not symmetric");
  }
  if (max_skew_defect(d3) > thr) {
    throw StructuralError("check_contraction: D3 is not skew-symmetric");
  }
  if (n > 0) {
    if (symmetric_eigen_range(d1).min <= 0.0) {
      throw StructuralError("check_contraction: D1 is not positive definite");
    }
    if (symmetric_eigen_range(d2).min <= 0.0) {
      throw StructuralError("check_contraction: D2 is not positive definite");
    }
    if (symmetric_eigen_range(d1 - d2).min < -thr) {
      throw StructuralError("check_contraction: D1 - D2 is not positive semidefinite");
    }
  }

  ContractionWitness w;
  w.d1 = d1;
  w.d2 = d2;
  w.d3 = d3;
  w.d4 = symmetric_sqrt(d2);
  const Eigen::PartialPivLU<DenseMatrix> lu(d1 + d3);
  w.f = w.d4 * lu.solve(w.d4);
  w.spectral_norm_f = spectral_norm(w.f);
  w.within_bound = w.spectral_norm_f <= 1.0 + kContractionSlack;
  return w;
}

double check_step_contraction(const OdeSystem& system, double k, const Vector& state) {
  if (!(k > 0) || !std::isfinite(k)) {
    throw ConfigError("check_step_contraction: timestep must be positive and finite");
  }
  const Index n = system.dim();
  const DenseMatrix nk =
      symmetric_sqrt(DenseMatrix::Identity(n, n) + k * system.c().to_dense());
  const Eigen::PartialPivLU<DenseMatrix> lu(dense_step_matrix(system, k, state));
  return spectral_norm(nk * lu.solve(nk));
}

double check_step_contraction(const OdeSystem& system, double k) {
  return check_step_contraction(system, k, system.initial_state());
}

Vector truncation_error(const OdeSystem& system, const ExactSolution& exact, double t_n,
                        double k) {
  const double t1 = t_n + k;
  const Vector u0 = exact(t_n);
  const Vector u1 = exact(t1);
  return (u1 - u0) / k + system.a().apply(u1) + system.b().at(u0).apply(u1) -
         system.c().apply(u0) - system.forcing(t1);
}

std::vector<std::pair<double, double>> truncation_order_probe(const OdeSystem& system,
                                                              const ExactSolution& exact,
                                                              double t_n,
                                                              const std::vector<double>& k_list) {
  std::vector<std::pair<double, double>> out;
  out.reserve(k_list.size());
  for (double k : k_list) {
    out.emplace_back(k, truncation_error(system, exact, t_n, k).norm());
  }
  return out;
}

double fitted_order(const std::vector<std::pair<double, double>>& samples) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& [k, v] : samples) {
    if (v > 0 && k > 0) {
      const double x = std::log(k), y = std::log(v);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
  }
  if (count < 2) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

namespace {

Vector rk4_advance(const OdeSystem& system, double t0, double dt, int steps, Vector u) {
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * dt;
    const Vector k1 = rhs_eval(system, t, u);
    const Vector k2 = rhs_eval(system, t + 0.5 * dt, u + 0.5 * dt * k1);
    const Vector k3 = rhs_eval(system, t + 0.5 * dt, u + 0.5 * dt * k2);
    const Vector k4 = rhs_eval(system, t + dt, u + dt * k3);
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

}  // namespace

Vector reference_solution(const OdeSystem& system, double horizon, int substeps) {
  if (substeps <= 0) {
    throw ConfigError("reference_solution: substeps must be positive");
  }
  if (!(horizon >= 0) || !std::isfinite(horizon)) {
    throw ConfigError("reference_solution: horizon must be finite and nonnegative");
  }
  if (horizon == 0.0) {
    return system.initial_state();
  }
  const Vector coarse =
      rk4_advance(system, 0.0, horizon / substeps, substeps, system.initial_state());
  const Vector fine =
      rk4_advance(system, 0.0, horizon / (2.0 * substeps), 2 * substeps, system.initial_state());
  const double diff = (coarse - fine).norm();
  if (!std::isfinite(diff) || diff > 1e-10 * fine.norm()) {
    throw OracleError("reference_solution: step halving changed the result by " +
                      std::to_string(diff) + " (norm " + std::to_string(fine.norm()) +
                      "); increase substeps");
  }
  return coarse;
}

SampledSolution sample_reference(const OdeSystem& system, double horizon, int samples,
                                 int substeps_per_sample) {
  if (samples <= 0 || substeps_per_sample <= 0) {
    throw ConfigError("sample_reference: sample and substep counts must be positive");
  }
  SampledSolution s;
  const double dt_sample = horizon / samples;
  Vector u = system.initial_state();
  for (int i = 0; i <= samples; ++i) {
    const double t = i * dt_sample;
    if (i > 0) {
      u = rk4_advance(system, (i - 1) * dt_sample, dt_sample / substeps_per_sample,
                      substeps_per_sample, std::move(u));
    }
    s.times.push_back(t);
    s.derivatives.push_back(rhs_eval(system, t, u));
    s.values.push_back(u);
  }
  return s;
}

std::vector<ConvergenceRow> convergence_study(const OdeSystem& system, double horizon,
                                              const std::vector<double>& k_list,
                                              const Vector& reference,
                                              const SolverOptions& options) {
  if (reference.size() != system.dim()) {
    throw StructuralError("convergence_study: reference has the wrong size");
  }
  std::vector<ConvergenceRow> rows;
  const EnergyMetric base(system.c(), k_list.empty() ? 1.0 : k_list.front());
  for (double k : k_list) {
    const double n_real = horizon / k;
    const double n_round = std::round(n_real);
    if (n_round < 1 || std::abs(n_round * k - horizon) > 1e-9 * horizon) {
      throw ConfigError("convergence_study: k = " + std::to_string(k) +
                        " does not divide the horizon");
    }
    const auto steps = static_cast<std::size_t>(n_round);
    const EnergyMetric metric = base.with_timestep(k);
    const TrajectoryRecord traj =
        integrate(system, SchemeConfig::make(k, steps), metric, options);
    if (traj.blew_up()) {
      throw SolverFailure("convergence_study: trajectory blew up", 0.0);
    }
    ConvergenceRow row;
    row.k = k;
    row.steps = steps;
    row.error_e = energy_norm(metric, traj.states.back() - reference);
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.observed_order = std::log(prev.error_e / row.error_e) / std::log(prev.k / row.k);
    }
    rows.push_back(row);
  }
  return rows;
}

double predicted_global_error(double gamma_e, double u, double lambda_min_c, double k,
                              std::size_t steps) {
  const double b = k / (1.0 + k * lambda_min_c);
  const double tau = k * u;
  if (gamma_e == 0.0) {
    return static_cast<double>(steps) * b * tau;
  }
  const double a = 1.0 + gamma_e * b;
  // sum_{j<steps} a^j = (a^steps - 1)/(a - 1), with a - 1 = gamma_e b.
  return b * tau * std::expm1(static_cast<double>(steps) * std::log1p(gamma_e * b)) /
         (a - 1.0);
}

ConvergenceBound measure_convergence_bound(const OdeSystem& system, const EnergyMetric& metric,
                                           double horizon, const BoundSampling& sampling) {
  const SampledSolution ref =
      sample_reference(system, horizon, sampling.samples, sampling.substeps_per_sample);
  const std::size_t count = ref.times.size();
  const double dt = horizon / sampling.samples;
  const double k = metric.k();
  const double op_factor = std::sqrt(1.0 + k * metric.lambda_max_c());

  ConvergenceBound out;
  out.k = k;
  out.horizon = horizon;
  out.lambda_min_c = metric.lambda_min_c();
  out.constant_b = system.b().is_constant();

  double max_u_e = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    max_u_e = std::max(max_u_e, energy_norm(metric, ref.values[i]));
    out.f_t = std::max(out.f_t, system.forcing(ref.times[i]).norm());
  }

  auto central = [&](const std::vector<Vector>& v, std::size_t i) -> Vector {
    if (i == 0) {
      return (v[1] - v[0]) / dt;
    }
    if (i + 1 == count) {
      return (v[i] - v[i - 1]) / dt;
    }
    return (v[i + 1] - v[i - 1]) / (2.0 * dt);
  };

  double gamma = 0.0;
  const Index n = system.dim();
  for (std::size_t i = 0; i < count; ++i) {
    const Vector upp = central(ref.derivatives, i);
    double term = energy_norm(metric, upp) +
                  energy_norm(metric, system.c().apply(ref.derivatives[i]));
    if (!out.constant_b) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == count ? i : i + 1;
      const DenseMatrix db = operator_derivative(system.b(), ref.values[lo], ref.values[hi],
                                                 static_cast<double>(hi - lo) * dt);
      term += spectral_norm(db) * op_factor * max_u_e;

      const Vector& u = ref.values[i];
      const double delta = 1e-6 * std::max(1.0, u.norm());
      DenseMatrix jac(n, n);
      for (Index j = 0; j < n; ++j) {
        Vector e_lo = u, e_hi = u;
        e_lo(j) -= delta;
        e_hi(j) += delta;
        jac.col(j) = operator_derivative(system.b(), e_lo, e_hi, 2.0 * delta) * u;
      }
      gamma = std::max(gamma, spectral_norm(jac));
    }
    out.u = std::max(out.u, term);
  }
  out.gamma_e = gamma * op_factor;
  const double n_real = std::round(horizon / k);
  out.predicted_error = predicted_global_error(out.gamma_e, out.u, out.lambda_min_c, k,
                                               static_cast<std::size_t>(std::max(0.0, n_real)));
  return out;
}

AuditOutcome stability_bound_audit(const TrajectoryRecord& traj, const EnergyMetric& metric) {
  AuditOutcome out;
  if (traj.scheme.variant != Variant::kImexStable) {
    out.note = "variant mismatch: bound applies to the imex variant only";
    return out;
  }
  if (traj.blew_up()) {
    out.note = "trajectory blew up";
    out.first_violation = traj.blow_up_step;
    return out;
  }
  if (metric.k() != traj.scheme.k) {
    out.note = "metric timestep differs from trajectory timestep";
    return out;
  }
  if (traj.states.empty()) {
    out.note = "empty trajectory";
    return out;
  }
  const double k = metric.k();
  const double factor = k / (1.0 + k * metric.lambda_min_c());
  const double e0 = energy_norm(metric, traj.states.front());
  const double slack = 1e-9 * (1.0 + e0);
  double forcing_sum = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  out.passed = true;
  for (std::size_t n = 0; n + 1 < traj.states.size(); ++n) {
    forcing_sum += traj.forcing_energy_norms.at(n);
    const double lhs = energy_norm(metric, traj.states[n + 1]);
    const double rhs = e0 + factor * forcing_sum + slack;
    if (lhs - rhs > worst_excess) {
      worst_excess = lhs - rhs;
      out.worst_value = lhs;
      out.worst_bound = rhs;
    }
    if (!(lhs <= rhs) && out.passed) {
      out.passed = false;
      out.first_violation = n + 1;
      out.note = "bound exceeded at step " + std::to_string(n + 1);
    }
  }
  return out;
}

AuditOutcome monotone_decay_audit(const TrajectoryRecord& traj, const EnergyMetric& metric,
                                  double slack) {
  AuditOutcome out;
  if (traj.states.empty()) {
    out.note = "empty trajectory";
    return out;
  }
  const double abs_slack = slack * energy_norm(metric, traj.states.front());
  double prev = energy_norm(metric, traj.states.front());
  double worst_excess = -std::numeric_limits<double>::infinity();
  out.passed = true;
  for (std::size_t n = 0; n + 1 < traj.states.size(); ++n) {
    const double next = energy_norm(metric, traj.states[n + 1]);
    const double rhs = prev + abs_slack;
    if (next - rhs > worst_excess) {
      worst_excess = next - rhs;
      out.worst_value = next;
      out.worst_bound = rhs;
    }
    if (!(next <= rhs) && out.passed) {
      out.passed = false;
      out.first_violation = n + 1;
      out.note = "energy increased at step " + std::to_string(n + 1);
    }
    prev = next;
  }
  return out;
}

std::vector<double> shifted_energy_norms(const TrajectoryRecord& traj, const EnergyMetric& metric,
                                         const Vector& shift) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const Vector& u : traj.states) {
    out.push_back(energy_norm(metric, u - shift));
  }
  return out;
}

std::optional<std::size_t> first_increase(const std::vector<double>& seq, double rel_tol) {
  if (seq.empty()) {
    return std::nullopt;
  }
  const double slack = rel_tol * seq.front();
  for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
    if (!(seq[n + 1] <= seq[n] + slack)) {
      return n;
    }
  }
  return std::nullopt;
}

Vector fixed_point(const OdeSystem& system, double t) {
  if (!system.b().is_constant()) {
    throw StructuralError("fixed_point: requires a constant skew field");
  }
  const Vector rhs = system.forcing(t);
  const LinearOperator b = system.b().at(system.initial_state());
  Vector x;
  double residual = 0.0;
  if (system.a().is_sparse_expressible() && b.is_sparse_expressible() &&
      system.c().is_sparse_expressible()) {
    SparseMatrix m = system.a().to_sparse() + b.to_sparse() - system.c().to_sparse();
    m.makeCompressed();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) {
      throw SolverFailure("fixed_point: sparse factorization failed (singular A + B - C)",
                          std::numeric_limits<double>::infinity());
    }
    x = lu.solve(rhs);
    residual = (m * x - rhs).norm();
  } else {
    const DenseMatrix m = system.a().to_dense() + b.to_dense() - system.c().to_dense();
    const Eigen::FullPivLU<DenseMatrix> lu(m);
    if (!lu.isInvertible()) {
      throw SolverFailure("fixed_point: A + B - C is singular",
                          std::numeric_limits<double>::infinity());
    }
    x = lu.solve(rhs);
    residual = (m * x - rhs).norm();
  }
  const double rel = rhs.norm() > 0 ? residual / rhs.norm() : residual;
  if (!x.allFinite() || rel > 1e-8) {
    throw SolverFailure("fixed_point: residual too large", rel);
  }
  return x;
}

}  // namespace imexstab
