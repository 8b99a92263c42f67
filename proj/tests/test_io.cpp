#include "test_helpers.hpp"

#include <imexstab/csv.hpp>
#include <imexstab/errors.hpp>
#include <imexstab/matrix_io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace imexstab;

TEST(Csv, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, FormatShortest) {
  EXPECT_EQ(format_shortest(0.1), "0.1");
  EXPECT_EQ(format_shortest(10.0), "10");
  EXPECT_EQ(std::stod(format_shortest(5e-3)), 5e-3);
}

TEST(Csv, Escape) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(Csv, WriterLayout) {
  const auto dir = testing_helpers::scratch_dir("csv_writer");
  {
    CsvWriter w(dir / "a.csv", {{"k", "1"}, {"run", "x;y"}}, {"t", "value", "tag"});
    w.field(0.5).field(2).field("a,b");
    w.end_row();
    w.comment("marker");
    w.field(true).field(std::size_t{7}).field(std::string_view("z"));
    w.end_row();
  }
  EXPECT_EQ(testing_helpers::slurp(dir / "a.csv"),
            "# k=1,run=x;y\nt,value,tag\n0.5,2,\"a,b\"\n# marker\ntrue,7,z\n");
}

TEST(MatrixIo, DenseRoundTrip) {
  DenseMatrix m(2, 3);
  m << 1, -2.5, 1e-300, 0.1, 3, 4;
  std::stringstream ss;
  write_dense_matrix(ss, m);
  EXPECT_EQ(read_dense_matrix(ss), m);
}

TEST(MatrixIo, SparseRoundTripAndDuplicates) {
  std::stringstream in("# comment\n3 3\n0 0 1.5\n2 1 -1\n0 0 0.5\n");
  const SparseMatrix s = read_sparse_matrix(in);
  EXPECT_EQ(s.rows(), 3);
  EXPECT_EQ(s.coeff(0, 0), 2.0);
  EXPECT_EQ(s.coeff(2, 1), -1.0);
  std::stringstream out;
  write_sparse_matrix(out, s);
  EXPECT_TRUE(read_sparse_matrix(out).isApprox(s));
}

TEST(MatrixIo, ErrorsNameTheLine) {
  std::stringstream ragged("1 2\n3\n");
  try {
    read_dense_matrix(ragged);
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::stringstream out_of_range("2 1\n5 0 1\n");
  EXPECT_THROW(read_sparse_matrix(out_of_range), StructuralError);
  std::stringstream bad_value("1 x\n");
  EXPECT_THROW(read_dense_matrix(bad_value), StructuralError);
}

TEST(MatrixIo, LoadMatrixKinds) {
  const auto dir = testing_helpers::scratch_dir("matrix_io");
  {
    std::ofstream(dir / "d.txt") << "1 0\n0 2\n";
    std::ofstream(dir / "s.txt") << "2 2\n0 0 1\n1 1 2\n";
  }
  const auto d = load_matrix(dir / "d.txt", MatrixFormat::kDense);
  const auto s = load_matrix(dir / "s.txt", MatrixFormat::kSparse);
  EXPECT_EQ(d.kind(), LinearOperator::Kind::kDense);
  EXPECT_EQ(s.kind(), LinearOperator::Kind::kSparse);
  EXPECT_EQ(d.to_dense(), s.to_dense());
  EXPECT_THROW(load_matrix(dir / "missing.txt", MatrixFormat::kDense), std::exception);
}
