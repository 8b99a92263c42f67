#pragma once

#include "imexstab/linear_operator.hpp"

#include <memory>

namespace imexstab {

struct SolverOptions {
  enum class Method {
    /// Row-pivoted LU (dense) or COLAMD-ordered sparse LU.
    kDirect,
    /// Restarted GMRES preconditioned by the symmetric part I + kA.
    kKrylov,
  };
  Method method = Method::kDirect;
  /// Accept x when ||M x - b||_2 <= rtol ||b||_2.
  double rtol = 1e-10;
  int krylov_restart = 50;
  int krylov_max_iterations = 5000;
};

/// M = I + kA + kB with A symmetric and B skew, so x^T M x = |x|^2 + k x^T A x.
/// Assembled explicitly: sparse when A and B are both stored sparsely,
/// dense otherwise.
class StepMatrix {
 public:
  static StepMatrix assemble(const LinearOperator& a, const LinearOperator& b, double k);
  /// I + kA, the implicit part of the explicit-advection variant.
  static StepMatrix assemble(const LinearOperator& a, double k);

  const LinearOperator& matrix() const noexcept { return m_; }
  /// Symmetric part I + kA, kept for the Krylov preconditioner.
  const LinearOperator& symmetric_part() const noexcept { return sym_; }
  double k() const noexcept { return k_; }
  Index dim() const noexcept { return m_.rows(); }
  bool is_sparse() const noexcept { return m_.kind() == LinearOperator::Kind::kSparse; }

 private:
  StepMatrix(LinearOperator m, LinearOperator sym, double k)
      : m_(std::move(m)), sym_(std::move(sym)), k_(k) {}
  LinearOperator m_;
  LinearOperator sym_;
  double k_;
};

/// lambda_min((M + M^T)/2), computed on demand by a dense eigensolve.
double symmetric_part_margin(const StepMatrix& m);

/// Factorization of a StepMatrix, computed once and reusable. solve() is
/// const and may be called concurrently.
class StepSolver {
 public:
  explicit StepSolver(StepMatrix m, SolverOptions options = {});
  ~StepSolver();
  StepSolver(StepSolver&&) noexcept;
  StepSolver& operator=(StepSolver&&) noexcept;

  /// Throws SolverFailure (carrying the achieved relative residual) if the
  /// tolerance is not met after iterative refinement and the dense fallback.
  Vector solve(const Vector& b) const;

  const StepMatrix& step_matrix() const noexcept { return m_; }
  const SolverOptions& options() const noexcept { return options_; }

 private:
  struct Impl;
  StepMatrix m_;
  SolverOptions options_;
  std::unique_ptr<Impl> impl_;
};

/// One-shot factor-and-solve.
Vector solve_step_matrix(const StepMatrix& m, const Vector& b, const SolverOptions& options = {});

}  // namespace imexstab
