#include "imexstab/matrix_io.hpp"

#include "imexstab/errors.hpp"
#include "imexstab/csv.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace imexstab {

namespace {

bool next_content_line(std::istream& in, std::string& line, long& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    return true;
  }
  return false;
}

[[noreturn]] void parse_error(long line_no, const std::string& what) {
  throw StructuralError("matrix file line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

DenseMatrix read_dense_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (next_content_line(in, line, line_no)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) {
      row.push_back(v);
    }
    if (!ls.eof()) {
      parse_error(line_no, "non-numeric token");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_error(line_no, "row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  DenseMatrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

SparseMatrix read_sparse_matrix(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!next_content_line(in, line, line_no)) {
    throw StructuralError("sparse matrix file: missing `n nnz` header");
  }
  long long n = 0, nnz = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> nnz) || n < 0 || nnz < 0) {
      parse_error(line_no, "bad header, expected `n nnz`");
    }
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  while (next_content_line(in, line, line_no)) {
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) {
      parse_error(line_no, "expected `i j value`");
    }
    if (i < 0 || j < 0 || i >= n || j >= n) {
      parse_error(line_no, "index out of range for n=" + std::to_string(n));
    }
    triplets.emplace_back(static_cast<Index>(i), static_cast<Index>(j), v);
  }
  if (static_cast<long long>(triplets.size()) != nnz) {
    throw StructuralError("sparse matrix file: header announces " + std::to_string(nnz) +
                          " entries, found " + std::to_string(triplets.size()));
  }
  SparseMatrix m(static_cast<Index>(n), static_cast<Index>(n));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

void write_dense_matrix(std::ostream& out, const DenseMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) {
        out << ' ';
      }
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_sparse_matrix(std::ostream& out, const SparseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("write_sparse_matrix: the coordinate format stores square matrices");
  }
  out << m.rows() << ' ' << m.nonZeros() << '\n';
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

LinearOperator load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw StructuralError("cannot open matrix file " + path.string());
  }
  if (format == MatrixFormat::kDense) {
    return LinearOperator::dense(read_dense_matrix(in));
  }
  return LinearOperator::sparse(read_sparse_matrix(in));
}

}  // namespace imexstab
