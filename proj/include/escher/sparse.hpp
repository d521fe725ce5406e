#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace escher {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted and unique within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Validates the CSR invariants; throws InvalidArgument on violation.
  SparseMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> column_indices,
               std::vector<double> values);

  /// Duplicate entries are summed. Entries are kept even when they sum to zero, so that
  /// matrices assembled on the same mesh share one sparsity pattern.
  static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);
  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& column_indices() const { return column_indices_; }
  const std::vector<double>& values() const { return values_; }
  /// Values may be overwritten in place; the pattern may not.
  std::span<double> mutable_values() { return values_; }

  /// Entry (i, j), zero if outside the pattern.
  double at(int i, int j) const;
  /// Position of (i, j) in values(), or -1.
  std::ptrdiff_t find(int i, int j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  bool same_pattern(const SparseMatrix& other) const;
  double norm_inf() const;
  double max_abs() const;
  SparseMatrix transposed() const;
  /// Dense row-major copy, for tests and small diagnostics.
  std::vector<double> to_dense() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> column_indices_;
  std::vector<double> values_;
};

/// a*A + b*B. Patterns are merged when they differ.
SparseMatrix linear_combination(double a, const SparseMatrix& lhs, double b,
                                const SparseMatrix& rhs);

/// [[a11, a12], [a21, a22]] for square blocks of equal size.
SparseMatrix block_2x2(const SparseMatrix& a11, const SparseMatrix& a12, const SparseMatrix& a21,
                       const SparseMatrix& a22);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
double sum(std::span<const double> a);

}  // namespace escher
