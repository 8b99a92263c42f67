#pragma once

#include "imexstab/energy.hpp"
#include "imexstab/stepper.hpp"
#include "imexstab/system.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace imexstab {

inline constexpr double kContractionSlack = 1e-10;

/// Symmetric PSD square root of (m + m^T)/2 by eigendecomposition, with
/// negative eigenvalues clamped to 0.
DenseMatrix symmetric_sqrt(const DenseMatrix& m);

struct ContractionWitness {
  DenseMatrix d1;
  DenseMatrix d2;
  DenseMatrix d3;
  DenseMatrix d4;  ///< D2^{1/2}
  DenseMatrix f;   ///< D4 (D1 + D3)^{-1} D4
  double spectral_norm_f = 0.0;
  bool within_bound = false;  ///< spectral_norm_f <= 1 + kContractionSlack
};

/// Preconditions: D1, D2 symmetric PD, D1 - D2 PSD, D3 skew, all checked
/// with `tol` relative to the largest matrix norm involved. A violation
/// throws StructuralError naming the condition.
ContractionWitness check_contraction(const DenseMatrix& d1, const DenseMatrix& d2,
                                     const DenseMatrix& d3, double tol = kDefaultStructureTol);

/// ||N_k (I + kA + kB(state))^{-1} N_k||_2 with N_k = (I + kC)^{1/2}.
/// Dense; meant for n up to about a thousand.
double check_step_contraction(const OdeSystem& system, double k, const Vector& state);
/// Same, with B evaluated at the initial state.
double check_step_contraction(const OdeSystem& system, double k);

using ExactSolution = std::function<Vector(double)>;

/// (u(t1) - u(t0))/k + A u(t1) + B(u(t0)) u(t1) - C u(t0) - f(t1), t1 = t0 + k.
Vector truncation_error(const OdeSystem& system, const ExactSolution& exact, double t_n, double k);

/// (k, ||tau||_2) for every k in k_list.
std::vector<std::pair<double, double>> truncation_order_probe(const OdeSystem& system,
                                                              const ExactSolution& exact,
                                                              double t_n,
                                                              const std::vector<double>& k_list);

/// Least-squares slope of log(value) against log(k). Zero values are
/// skipped; NaN if fewer than two samples remain.
double fitted_order(const std::vector<std::pair<double, double>>& samples);

/// Classical RK4 for u' = f - Au - B(u)u + Cu with step T/substeps. The
/// result is compared with a run at twice the substeps; a relative
/// difference above 1e-10 throws OracleError.
Vector reference_solution(const OdeSystem& system, double horizon, int substeps);

/// u(t_i), u'(t_i) at t_i = i T / samples, i = 0..samples, by RK4 with
/// `substeps_per_sample` steps between samples.
struct SampledSolution {
  std::vector<double> times;
  std::vector<Vector> values;
  std::vector<Vector> derivatives;
};
SampledSolution sample_reference(const OdeSystem& system, double horizon, int samples,
                                 int substeps_per_sample);

struct ConvergenceRow {
  double k = 0.0;
  std::size_t steps = 0;
  double error_e = 0.0;
  /// log(e_prev / e) / log(k_prev / k); NaN on the first row.
  double observed_order = 0.0;
};

/// Global error ||u_N - reference||_E at T = N k for every k (IMEX variant).
/// Throws ConfigError if some k does not divide T to within 1e-9 relative.
std::vector<ConvergenceRow> convergence_study(const OdeSystem& system, double horizon,
                                              const std::vector<double>& k_list,
                                              const Vector& reference,
                                              const SolverOptions& options = {});

struct ConvergenceBound {
  double gamma_e = 0.0;
  double u = 0.0;
  double lambda_min_c = 0.0;
  double k = 0.0;
  double horizon = 0.0;
  double predicted_error = 0.0;
  double f_t = 0.0;  ///< max ||f(t)||_2 over the samples
  bool constant_b = false;
};

/// Error bound after `steps` steps from the recursion
///   r_{n+1} <= (1 + k G/(1 + k lmin)) r_n + k/(1 + k lmin) * k U,  r_0 = 0,
/// summed exactly; G = 0 gives steps * k^2 U / (1 + k lmin).
double predicted_global_error(double gamma_e, double u, double lambda_min_c, double k,
                              std::size_t steps);

struct BoundSampling {
  int samples = 200;
  int substeps_per_sample = 20;
};

/// Measures U and Gamma_E along an RK4 reference trajectory:
///   U = max_t (||u''||_E + ||C u'||_E + ||dB(u(t))/dt||_E max_s ||u(s)||_E),
/// with u'' and dB/dt by central differences of the samples, and
///   Gamma = max_t ||e -> [grad B(u(t)) e] u(t)||_2,  Gamma_E = Gamma sqrt(1 + k lmax).
/// Gamma is 0 exactly for constant B. Energy norms of operators use the
/// bound ||X||_2 sqrt(1 + k lmax).
ConvergenceBound measure_convergence_bound(const OdeSystem& system, const EnergyMetric& metric,
                                           double horizon, const BoundSampling& sampling = {});

struct AuditOutcome {
  bool passed = false;
  std::string note;
  std::optional<std::size_t> first_violation;
  /// Left and right side at the step with the largest excess (lhs - rhs).
  double worst_value = 0.0;
  double worst_bound = 0.0;
};

/// ||u_{n+1}||_E <= ||u_0||_E + k/(1 + k lmin) sum_{p<=n} ||f_{p+1}||_E
///                  + 1e-9 (1 + ||u_0||_E)   for every n.
/// Fails with a note for explicit-advection or blown-up trajectories and for
/// a metric whose k differs from the trajectory's.
AuditOutcome stability_bound_audit(const TrajectoryRecord& traj, const EnergyMetric& metric);

/// ||u_{n+1}||_E <= ||u_n||_E + slack ||u_0||_E for every n.
AuditOutcome monotone_decay_audit(const TrajectoryRecord& traj, const EnergyMetric& metric,
                                  double slack = 1e-12);

/// ||u_n - shift||_E for every recorded state.
std::vector<double> shifted_energy_norms(const TrajectoryRecord& traj, const EnergyMetric& metric,
                                         const Vector& shift);

/// First n with seq[n+1] > seq[n] + rel_tol * seq[0]. The tolerance is
/// scaled by the first entry so that a sequence that has converged to the
/// roundoff floor is not reported as increasing.
std::optional<std::size_t> first_increase(const std::vector<double>& seq, double rel_tol);

/// Solution of (A + B - C) u* = f(t) for constant B: the state the scheme
/// leaves unchanged. Sparse LU when every operator is sparse-expressible,
/// dense LU otherwise. Throws SolverFailure if the matrix is singular.
Vector fixed_point(const OdeSystem& system, double t = 0.0);

}  // namespace imexstab
