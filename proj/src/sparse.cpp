#include "escher/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "escher/error.hpp"

namespace escher {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_offsets,
                           std::vector<int> column_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      column_indices_(std::move(column_indices)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0 || row_offsets_.size() != static_cast<std::size_t>(rows_) + 1 ||
      row_offsets_.front() != 0 ||
      static_cast<std::size_t>(row_offsets_.back()) != column_indices_.size() ||
      column_indices_.size() != values_.size()) {
    fail(ErrorCode::InvalidArgument, "inconsistent CSR array sizes");
  }
  for (int i = 0; i < rows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) {
      fail(ErrorCode::InvalidArgument, "row offsets not monotone at row " + std::to_string(i));
    }
    for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const int c = column_indices_[p];
      if (c < 0 || c >= cols_ || (p > row_offsets_[i] && column_indices_[p - 1] >= c)) {
        fail(ErrorCode::InvalidArgument,
             "column indices not sorted/unique/in range in row " + std::to_string(i));
      }
      if (!std::isfinite(values_[p])) {
        fail(ErrorCode::InvalidArgument, "non-finite value in row " + std::to_string(i));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets) {
  std::vector<int> counts(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      fail(ErrorCode::InvalidArgument, "triplet index out of range");
    }
    ++counts[t.row + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  // bucket by row, then sort each row by column and merge duplicates
  std::vector<std::pair<int, double>> entries(triplets.size());
  {
    std::vector<int> next(counts.begin(), counts.end() - 1);
    for (const auto& t : triplets) entries[next[t.row]++] = {t.col, t.value};
  }
  std::vector<int> offsets(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> columns;
  std::vector<double> values;
  columns.reserve(entries.size());
  values.reserve(entries.size());
  for (int i = 0; i < rows; ++i) {
    auto first = entries.begin() + counts[i];
    auto last = entries.begin() + counts[i + 1];
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!columns.empty() && static_cast<int>(columns.size()) > offsets[i] &&
          columns.back() == it->first) {
        values.back() += it->second;
      } else {
        columns.push_back(it->first);
        values.push_back(it->second);
      }
    }
    offsets[i + 1] = static_cast<int>(columns.size());
  }
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_ = std::move(offsets);
  m.column_indices_ = std::move(columns);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> offsets(static_cast<std::size_t>(n) + 1);
  std::iota(offsets.begin(), offsets.end(), 0);
  std::vector<int> columns(static_cast<std::size_t>(n));
  std::iota(columns.begin(), columns.end(), 0);
  return SparseMatrix(n, n, std::move(offsets), std::move(columns),
                      std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

std::ptrdiff_t SparseMatrix::find(int i, int j) const {
  if (i < 0 || i >= rows_) return -1;
  const auto first = column_indices_.begin() + row_offsets_[i];
  const auto last = column_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return it - column_indices_.begin();
}

double SparseMatrix::at(int i, int j) const {
  const auto p = find(i, j);
  return p < 0 ? 0.0 : values_[p];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols_) || y.size() != static_cast<std::size_t>(rows_)) {
    fail(ErrorCode::LengthMismatch, "matrix-vector size mismatch");
  }
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      s += values_[p] * x[column_indices_[p]];
    }
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(rows_));
  multiply(x, y);
  return y;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_offsets_ == other.row_offsets_ &&
         column_indices_ == other.column_indices_;
}

double SparseMatrix::norm_inf() const {
  double n = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += std::abs(values_[p]);
    n = std::max(n, s);
  }
  return n;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (int i = 0; i < rows_; ++i) {
    for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      t.push_back({column_indices_[p], i, values_[p]});
    }
  }
  return from_triplets(cols_, rows_, t);
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      d[static_cast<std::size_t>(i) * cols_ + column_indices_[p]] = values_[p];
    }
  }
  return d;
}

SparseMatrix linear_combination(double a, const SparseMatrix& lhs, double b,
                                const SparseMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    fail(ErrorCode::LengthMismatch, "matrix shapes differ");
  }
  if (lhs.same_pattern(rhs)) {
    std::vector<double> v(lhs.nnz());
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = a * lhs.values()[p] + b * rhs.values()[p];
    return SparseMatrix(lhs.rows(), lhs.cols(), lhs.row_offsets(), lhs.column_indices(),
                        std::move(v));
  }
  std::vector<Triplet> t;
  t.reserve(lhs.nnz() + rhs.nnz());
  for (const auto* m : {&lhs, &rhs}) {
    const double s = m == &lhs ? a : b;
    for (int i = 0; i < m->rows(); ++i) {
      for (int p = m->row_offsets()[i]; p < m->row_offsets()[i + 1]; ++p) {
        t.push_back({i, m->column_indices()[p], s * m->values()[p]});
      }
    }
  }
  return SparseMatrix::from_triplets(lhs.rows(), lhs.cols(), t);
}

SparseMatrix block_2x2(const SparseMatrix& a11, const SparseMatrix& a12, const SparseMatrix& a21,
                       const SparseMatrix& a22) {
  const int n = a11.rows();
  for (const auto* m : {&a11, &a12, &a21, &a22}) {
    if (m->rows() != n || m->cols() != n) fail(ErrorCode::LengthMismatch, "block size mismatch");
  }
  std::vector<int> offsets(2 * static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> columns;
  std::vector<double> values;
  const std::size_t total = a11.nnz() + a12.nnz() + a21.nnz() + a22.nnz();
  columns.reserve(total);
  values.reserve(total);
  auto append_row = [&](const SparseMatrix& m, int i, int shift) {
    for (int p = m.row_offsets()[i]; p < m.row_offsets()[i + 1]; ++p) {
      columns.push_back(m.column_indices()[p] + shift);
      values.push_back(m.values()[p]);
    }
  };
  for (int i = 0; i < n; ++i) {
    append_row(a11, i, 0);
    append_row(a12, i, n);
    offsets[i + 1] = static_cast<int>(columns.size());
  }
  for (int i = 0; i < n; ++i) {
    append_row(a21, i, 0);
    append_row(a22, i, n);
    offsets[n + i + 1] = static_cast<int>(columns.size());
  }
  return SparseMatrix(2 * n, 2 * n, std::move(offsets), std::move(columns), std::move(values));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "dot product size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double sum(std::span<const double> a) { return std::accumulate(a.begin(), a.end(), 0.0); }

}  // namespace escher
