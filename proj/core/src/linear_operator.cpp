#include "imexstab/linear_operator.hpp"

#include "imexstab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <string>
#include <variant>

namespace imexstab {

namespace {

struct SpdInverseData {
  Index n = 0;
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> factor;
};

struct CompositeData {
  std::vector<LinearOperator> factors;
  double scale = 1.0;
};

}  // namespace

struct LinearOperator::Impl {
  std::variant<DenseMatrix, SparseMatrix, SpdInverseData, CompositeData> data;
  Index rows = 0;
  Index cols = 0;
};

LinearOperator::LinearOperator()
    : impl_(std::make_shared<const Impl>(Impl{DenseMatrix(0, 0), 0, 0})) {}

LinearOperator::LinearOperator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

LinearOperator LinearOperator::dense(DenseMatrix m) {
  const Index r = m.rows(), c = m.cols();
  return LinearOperator(std::make_shared<const Impl>(Impl{std::move(m), r, c}));
}

LinearOperator LinearOperator::sparse(SparseMatrix m) {
  m.makeCompressed();
  const Index r = m.rows(), c = m.cols();
  return LinearOperator(std::make_shared<const Impl>(Impl{std::move(m), r, c}));
}

LinearOperator LinearOperator::spd_inverse(const SparseMatrix& spd) {
  if (spd.rows() != spd.cols()) {
    throw StructuralError("spd_inverse: matrix is not square");
  }
  auto llt = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(spd);
  if (llt->info() != Eigen::Success) {
    throw StructuralError("spd_inverse: Cholesky factorization failed (matrix not SPD)");
  }
  SpdInverseData d{spd.rows(), std::move(llt)};
  return LinearOperator(std::make_shared<const Impl>(Impl{std::move(d), spd.rows(), spd.rows()}));
}

LinearOperator LinearOperator::composite(std::vector<LinearOperator> in_order, double scale) {
  if (in_order.empty()) {
    throw StructuralError("composite: no factors");
  }
  for (std::size_t i = 1; i < in_order.size(); ++i) {
    if (in_order[i].cols() != in_order[i - 1].rows()) {
      throw StructuralError("composite: factor " + std::to_string(i) + " has " +
                            std::to_string(in_order[i].cols()) + " columns, expected " +
                            std::to_string(in_order[i - 1].rows()));
    }
  }
  const Index r = in_order.back().rows();
  const Index c = in_order.front().cols();
  CompositeData d{std::move(in_order), scale};
  return LinearOperator(std::make_shared<const Impl>(Impl{std::move(d), r, c}));
}

LinearOperator LinearOperator::identity(Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return sparse(std::move(id));
}

LinearOperator LinearOperator::zero(Index n) { return sparse(SparseMatrix(n, n)); }

LinearOperator::Kind LinearOperator::kind() const noexcept {
  return static_cast<Kind>(impl_->data.index());
}

Index LinearOperator::rows() const noexcept { return impl_->rows; }
Index LinearOperator::cols() const noexcept { return impl_->cols; }

bool LinearOperator::is_explicit() const noexcept {
  return kind() == Kind::kDense || kind() == Kind::kSparse;
}

DenseMatrix LinearOperator::apply(const DenseMatrix& x) const {
  if (x.rows() != cols()) {
    throw StructuralError("apply: operand has " + std::to_string(x.rows()) + " rows, operator has " +
                          std::to_string(cols()) + " columns");
  }
  return std::visit(
      [&](const auto& d) -> DenseMatrix {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DenseMatrix>) {
          return d * x;
        } else if constexpr (std::is_same_v<T, SparseMatrix>) {
          return d * x;
        } else if constexpr (std::is_same_v<T, SpdInverseData>) {
          return d.factor->solve(x);
        } else {
          DenseMatrix y = d.factors.front().apply(x);
          for (std::size_t i = 1; i < d.factors.size(); ++i) {
            y = d.factors[i].apply(y);
          }
          if (d.scale != 1.0) {
            y *= d.scale;
          }
          return y;
        }
      },
      impl_->data);
}

Vector LinearOperator::apply(const Vector& x) const {
  if (x.size() != cols()) {
    throw StructuralError("apply: vector of size " + std::to_string(x.size()) +
                          " for operator with " + std::to_string(cols()) + " columns");
  }
  return std::visit(
      [&](const auto& d) -> Vector {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DenseMatrix>) {
          return d * x;
        } else if constexpr (std::is_same_v<T, SparseMatrix>) {
          return d * x;
        } else if constexpr (std::is_same_v<T, SpdInverseData>) {
          return d.factor->solve(x);
        } else {
          Vector y = d.factors.front().apply(x);
          for (std::size_t i = 1; i < d.factors.size(); ++i) {
            y = d.factors[i].apply(y);
          }
          if (d.scale != 1.0) {
            y *= d.scale;
          }
          return y;
        }
      },
      impl_->data);
}

DenseMatrix LinearOperator::to_dense() const {
  if (const auto* d = std::get_if<DenseMatrix>(&impl_->data)) {
    return *d;
  }
  if (const auto* s = std::get_if<SparseMatrix>(&impl_->data)) {
    return DenseMatrix(*s);
  }
  return apply(DenseMatrix(DenseMatrix::Identity(cols(), cols())));
}

SparseMatrix LinearOperator::to_sparse() const {
  return std::visit(
      [&](const auto& d) -> SparseMatrix {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DenseMatrix>) {
          return d.sparseView();
        } else if constexpr (std::is_same_v<T, SparseMatrix>) {
          return d;
        } else if constexpr (std::is_same_v<T, SpdInverseData>) {
          throw StructuralError("to_sparse: operator contains an inverse factor");
        } else {
          SparseMatrix y = d.factors.front().to_sparse();
          for (std::size_t i = 1; i < d.factors.size(); ++i) {
            y = (d.factors[i].to_sparse() * y).pruned();
          }
          if (d.scale != 1.0) {
            y *= d.scale;
          }
          return y;
        }
      },
      impl_->data);
}

bool LinearOperator::is_sparse_expressible() const noexcept {
  if (kind() == Kind::kSpdInverse) {
    return false;
  }
  for (const auto& f : factors()) {
    if (!f.is_sparse_expressible()) {
      return false;
    }
  }
  return true;
}

const DenseMatrix& LinearOperator::dense_matrix() const {
  if (const auto* d = std::get_if<DenseMatrix>(&impl_->data)) {
    return *d;
  }
  throw StructuralError("dense_matrix: operator is not stored densely");
}

const SparseMatrix& LinearOperator::sparse_matrix() const {
  if (const auto* s = std::get_if<SparseMatrix>(&impl_->data)) {
    return *s;
  }
  throw StructuralError("sparse_matrix: operator is not stored sparsely");
}

std::span<const LinearOperator> LinearOperator::factors() const noexcept {
  if (const auto* c = std::get_if<CompositeData>(&impl_->data)) {
    return c->factors;
  }
  return {};
}

double LinearOperator::scale() const noexcept {
  if (const auto* c = std::get_if<CompositeData>(&impl_->data)) {
    return c->scale;
  }
  return 1.0;
}

Index LinearOperator::max_row_nonzeros() const {
  if (std::holds_alternative<DenseMatrix>(impl_->data)) {
    return cols();
  }
  if (const auto* s = std::get_if<SparseMatrix>(&impl_->data)) {
    Eigen::SparseMatrix<double, Eigen::RowMajor> rm(*s);
    Index best = 0;
    for (Index r = 0; r < rm.outerSize(); ++r) {
      Index count = 0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, r); it; ++it) {
        ++count;
      }
      best = std::max(best, count);
    }
    return best;
  }
  return -1;
}

LinearOperator LinearOperator::scaled(double s) const {
  if (const auto* d = std::get_if<DenseMatrix>(&impl_->data)) {
    return dense(s * *d);
  }
  if (const auto* sp = std::get_if<SparseMatrix>(&impl_->data)) {
    return sparse(s * *sp);
  }
  if (const auto* c = std::get_if<CompositeData>(&impl_->data)) {
    return composite(c->factors, s * c->scale);
  }
  return composite({*this}, s);
}

double max_asymmetry(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("max_asymmetry: matrix is not square");
  }
  return m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
}

double max_asymmetry(const SparseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("max_asymmetry: matrix is not square");
  }
  SparseMatrix d = m - SparseMatrix(m.transpose());
  double best = 0.0;
  for (Index k = 0; k < d.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) {
      best = std::max(best, std::abs(it.value()));
    }
  }
  return best;
}

double max_skew_defect(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("max_skew_defect: matrix is not square");
  }
  return m.size() == 0 ? 0.0 : (m + m.transpose()).cwiseAbs().maxCoeff();
}

double max_skew_defect(const SparseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("max_skew_defect: matrix is not square");
  }
  SparseMatrix d = m + SparseMatrix(m.transpose());
  double best = 0.0;
  for (Index k = 0; k < d.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) {
      best = std::max(best, std::abs(it.value()));
    }
  }
  return best;
}

double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::BDCSVD<DenseMatrix> svd(m);
  return svd.singularValues()(0);
}

EigenRange symmetric_eigen_range(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("symmetric_eigen_range: matrix is not square");
  }
  if (m.size() == 0) {
    return {};
  }
  const DenseMatrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw StructuralError("symmetric_eigen_range: eigensolver did not converge");
  }
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace imexstab
