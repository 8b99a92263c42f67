#pragma once

#include "imexstab/linear_operator.hpp"

#include <filesystem>
#include <iosfwd>

namespace imexstab {

// Plain-text matrix formats.
//
//   dense : one row per line, whitespace-separated values; every row must
//           have the same length.
//   sparse: header line `n nnz`, then nnz lines `i j value` (0-based),
//           describing an n x n matrix. Duplicate entries are summed.
//
// Blank lines and lines starting with '#' are ignored in both formats.

DenseMatrix read_dense_matrix(std::istream& in);
SparseMatrix read_sparse_matrix(std::istream& in);

void write_dense_matrix(std::ostream& out, const DenseMatrix& m);
void write_sparse_matrix(std::ostream& out, const SparseMatrix& m);

enum class MatrixFormat { kDense, kSparse };

/// Reads a file in the given format into an operator of the matching kind.
LinearOperator load_matrix(const std::filesystem::path& path, MatrixFormat format);

}  // namespace imexstab
