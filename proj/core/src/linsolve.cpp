#include "imexstab/linsolve.hpp"

#include "imexstab/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>
#include <optional>
#include <string>

namespace imexstab {

namespace {

constexpr Index kDenseFallbackLimit = 4096;
constexpr int kRefinementSweeps = 3;

// Preconditioner for GMRES that applies (I + kA)^{-1} from a Cholesky factor
// computed up front. compute() is a no-op so the factor is shared between
// solver instances.
class SymmetricPartPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  SymmetricPartPreconditioner() = default;
  explicit SymmetricPartPreconditioner(
      std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> factor)
      : factor_(std::move(factor)) {}

  template <typename MatType>
  SymmetricPartPreconditioner& analyzePattern(const MatType&) {
    return *this;
  }
  template <typename MatType>
  SymmetricPartPreconditioner& factorize(const MatType&) {
    return *this;
  }
  template <typename MatType>
  SymmetricPartPreconditioner& compute(const MatType&) {
    return *this;
  }

  template <typename Rhs>
  Vector solve(const Eigen::MatrixBase<Rhs>& b) const {
    if (!factor_) {
      return b;
    }
    return factor_->solve(Vector(b));
  }

  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> factor_;
};

double relative_residual(const LinearOperator& m, const Vector& x, const Vector& b, double bnorm) {
  return (m.apply(x) - b).norm() / bnorm;
}

}  // namespace

StepMatrix StepMatrix::assemble(const LinearOperator& a, const LinearOperator& b, double k) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw StructuralError("StepMatrix: A and B must be square and of equal size");
  }
  if (!(k >= 0) || !std::isfinite(k)) {
    throw StructuralError("StepMatrix: timestep must be nonnegative and finite");
  }
  const Index n = a.rows();
  if (a.kind() == LinearOperator::Kind::kSparse && b.kind() == LinearOperator::Kind::kSparse) {
    SparseMatrix id(n, n);
    id.setIdentity();
    SparseMatrix sym = id + k * a.sparse_matrix();
    SparseMatrix m = sym + k * b.sparse_matrix();
    return StepMatrix(LinearOperator::sparse(std::move(m)), LinearOperator::sparse(std::move(sym)),
                      k);
  }
  DenseMatrix sym = DenseMatrix::Identity(n, n) + k * a.to_dense();
  DenseMatrix m = sym + k * b.to_dense();
  return StepMatrix(LinearOperator::dense(std::move(m)), LinearOperator::dense(std::move(sym)),
                    k);
}

StepMatrix StepMatrix::assemble(const LinearOperator& a, double k) {
  if (a.kind() == LinearOperator::Kind::kSparse) {
    return assemble(a, LinearOperator::zero(a.rows()), k);
  }
  return assemble(a, LinearOperator::dense(DenseMatrix::Zero(a.rows(), a.cols())), k);
}

double symmetric_part_margin(const StepMatrix& m) {
  return symmetric_eigen_range(m.matrix().to_dense()).min;
}

struct StepSolver::Impl {
  std::optional<Eigen::PartialPivLU<DenseMatrix>> dense_lu;
  std::optional<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> sparse_lu;
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> sym_factor;
};

StepSolver::StepSolver(StepMatrix m, SolverOptions options)
    : m_(std::move(m)), options_(options), impl_(std::make_unique<Impl>()) {
  if (!(options_.rtol > 0)) {
    throw StructuralError("StepSolver: rtol must be positive");
  }
  if (options_.method == SolverOptions::Method::kKrylov) {
    auto llt = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(m_.symmetric_part().to_sparse());
    if (llt->info() == Eigen::Success) {
      impl_->sym_factor = std::move(llt);
    }
    return;
  }
  if (m_.is_sparse()) {
    impl_->sparse_lu.emplace();
    impl_->sparse_lu->analyzePattern(m_.matrix().sparse_matrix());
    impl_->sparse_lu->factorize(m_.matrix().sparse_matrix());
    if (impl_->sparse_lu->info() != Eigen::Success) {
      impl_->sparse_lu.reset();
    }
  } else {
    impl_->dense_lu.emplace(m_.matrix().dense_matrix());
  }
}

StepSolver::~StepSolver() = default;
StepSolver::StepSolver(StepSolver&&) noexcept = default;
StepSolver& StepSolver::operator=(StepSolver&&) noexcept = default;

Vector StepSolver::solve(const Vector& b) const {
  const Index n = m_.dim();
  if (b.size() != n) {
    throw StructuralError("StepSolver::solve: right-hand side of size " + std::to_string(b.size()) +
                          ", expected " + std::to_string(n));
  }
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    return Vector::Zero(n);
  }
  const LinearOperator& mat = m_.matrix();

  Vector x;
  if (options_.method == SolverOptions::Method::kKrylov) {
    Eigen::GMRES<SparseMatrix, SymmetricPartPreconditioner> gmres;
    gmres.preconditioner() = SymmetricPartPreconditioner(impl_->sym_factor);
    gmres.set_restart(options_.krylov_restart);
    gmres.setMaxIterations(options_.krylov_max_iterations);
    gmres.setTolerance(0.1 * options_.rtol);
    const SparseMatrix sm = mat.to_sparse();
    gmres.compute(sm);
    x = gmres.solve(b);
  } else if (impl_->sparse_lu) {
    x = impl_->sparse_lu->solve(b);
  } else if (impl_->dense_lu) {
    x = impl_->dense_lu->solve(b);
  } else {
    x = Vector::Zero(n);
  }

  auto finite = [](const Vector& v) { return v.allFinite(); };
  double res = finite(x) ? relative_residual(mat, x, b, bnorm) : INFINITY;
  if ((impl_->sparse_lu || impl_->dense_lu) && finite(x)) {
    for (int sweep = 0; sweep < kRefinementSweeps && res > options_.rtol; ++sweep) {
      const Vector r = b - mat.apply(x);
      const Vector dx = impl_->sparse_lu ? Vector(impl_->sparse_lu->solve(r))
                                         : Vector(impl_->dense_lu->solve(r));
      x += dx;
      res = relative_residual(mat, x, b, bnorm);
    }
  }
  if (!(res <= options_.rtol) && n <= kDenseFallbackLimit) {
    Eigen::FullPivLU<DenseMatrix> lu(mat.to_dense());
    x = lu.solve(b);
    res = finite(x) ? relative_residual(mat, x, b, bnorm) : INFINITY;
  }
  if (!(res <= options_.rtol)) {
    throw SolverFailure("step solve did not reach relative residual " +
                            std::to_string(options_.rtol) + " (achieved " + std::to_string(res) +
                            ")",
                        res);
  }
  return x;
}

Vector solve_step_matrix(const StepMatrix& m, const Vector& b, const SolverOptions& options) {
  return StepSolver(m, options).solve(b);
}

}  // namespace imexstab
