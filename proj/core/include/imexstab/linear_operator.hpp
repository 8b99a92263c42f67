#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <span>
#include <vector>

namespace imexstab {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Immutable real linear map, stored as one of
///   - a dense matrix,
///   - a compressed sparse matrix,
///   - the inverse of a sparse SPD matrix (held as a Cholesky factorization),
///   - a sequence of such factors applied one after another, times a scalar.
///
/// Copies share the underlying storage; nothing is mutated after construction,
/// so operators may be applied concurrently from several threads.
class LinearOperator {
 public:
  enum class Kind { kDense, kSparse, kSpdInverse, kComposite };

  /// Empty 0x0 operator.
  LinearOperator();

  static LinearOperator dense(DenseMatrix m);
  static LinearOperator sparse(SparseMatrix m);
  /// x -> spd^{-1} x. Throws StructuralError if the Cholesky factorization fails.
  static LinearOperator spd_inverse(const SparseMatrix& spd);
  /// x -> scale * F_last(... F_1(F_0 x)); `in_order` lists factors in the
  /// order they are applied.
  static LinearOperator composite(std::vector<LinearOperator> in_order, double scale = 1.0);
  static LinearOperator identity(Index n);
  static LinearOperator zero(Index n);

  Kind kind() const noexcept;
  Index rows() const noexcept;
  Index cols() const noexcept;
  bool is_square() const noexcept { return rows() == cols(); }
  /// True for the dense and sparse kinds.
  bool is_explicit() const noexcept;

  Vector apply(const Vector& x) const;
  DenseMatrix apply(const DenseMatrix& x) const;
  Vector operator*(const Vector& x) const { return apply(x); }

  DenseMatrix to_dense() const;
  /// Sparse form of an explicit or composite operator made only of explicit
  /// factors; throws StructuralError for operators containing an inverse.
  SparseMatrix to_sparse() const;
  /// False when to_sparse() would throw.
  bool is_sparse_expressible() const noexcept;

  /// Stored matrix; throws StructuralError if the kind does not match.
  const DenseMatrix& dense_matrix() const;
  const SparseMatrix& sparse_matrix() const;

  /// Factors of a composite in application order (empty for other kinds).
  std::span<const LinearOperator> factors() const noexcept;
  double scale() const noexcept;

  /// Largest number of stored entries in any row (dense: cols()). Undefined
  /// for the inverse and composite kinds, which return -1.
  Index max_row_nonzeros() const;

  LinearOperator scaled(double s) const;

 private:
  struct Impl;
  explicit LinearOperator(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Largest absolute entry of m - m^T (0 for exactly symmetric storage).
double max_asymmetry(const DenseMatrix& m);
double max_asymmetry(const SparseMatrix& m);
/// Largest absolute entry of m + m^T.
double max_skew_defect(const DenseMatrix& m);
double max_skew_defect(const SparseMatrix& m);

/// Spectral norm of an arbitrary dense matrix, from its singular values.
double spectral_norm(const DenseMatrix& m);
/// Smallest and largest eigenvalue of (m + m^T)/2.
struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};
EigenRange symmetric_eigen_range(const DenseMatrix& m);

}  // namespace imexstab
