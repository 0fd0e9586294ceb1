#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "neuralnmf/errors.hpp"

namespace nnmf {

using Vector = std::vector<double>;

/// Relative cutoff below which a matrix counts as rank deficient.
inline constexpr double kDefaultRankTol = 1e-10;

/// Strictly increasing set of zero-based positions into a dimension of
/// known size. Used for row/column restriction and for NNLS supports.
class IndexSet {
 public:
  IndexSet() = default;

  /// Validates ordering and range; throws IndexOutOfRange on violation.
  IndexSet(std::vector<std::size_t> indices, std::size_t universe);

  /// The full set {0, ..., universe-1}.
  static IndexSet all(std::size_t universe);

  std::size_t size() const { return indices_.size(); }
  std::size_t universe() const { return universe_; }
  bool empty() const { return indices_.empty(); }
  bool full() const { return indices_.size() == universe_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<std::size_t>& indices() const { return indices_; }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(std::size_t value) const;

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.universe_ == b.universe_ && a.indices_ == b.indices_;
  }
  friend bool operator!=(const IndexSet& a, const IndexSet& b) {
    return !(a == b);
  }

 private:
  std::vector<std::size_t> indices_;
  std::size_t universe_ = 0;
};

/// Dense real matrix, row-major storage. The single carrier type for data
/// matrices, factor matrices, label matrices and gradients.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  /// n x 1 matrix from a vector.
  static DenseMatrix column(const Vector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }

  const Vector& data() const { return data_; }
  Vector& data() { return data_; }

  DenseMatrix transposed() const;

  Vector col(std::size_t j) const;
  Vector row(std::size_t i) const;
  void set_col(std::size_t j, const Vector& v);

  bool nonnegative(double tol = 0.0) const;
  double min() const;
  double max() const;
  double max_abs() const;
  double sum() const;
  double mean() const { return data_.empty() ? 0.0 : sum() / data_.size(); }

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double scalar);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

bool operator==(const DenseMatrix& a, const DenseMatrix& b);

/// Matrix product (Eigen-backed).
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double scalar, DenseMatrix m);

/// Matrix-vector product A * v.
Vector operator*(const DenseMatrix& a, const Vector& v);

/// A^T * v without materializing the transpose.
Vector transpose_times(const DenseMatrix& a, const Vector& v);

/// Moore-Penrose pseudoinverse via SVD. Throws RankDeficient when the
/// smallest singular value is at or below rank_tol times the largest.
DenseMatrix pinv(const DenseMatrix& m, double rank_tol = kDefaultRankTol);

/// Submatrix copy M[rowSet, colSet]; std::nullopt selects everything.
DenseMatrix restrict(const DenseMatrix& m,
                     const std::optional<IndexSet>& row_set,
                     const std::optional<IndexSet>& col_set);

/// Inverse of row restriction: rows of src land at row_set positions of a
/// target_rows-tall zero matrix.
DenseMatrix scatter_rows(const DenseMatrix& src, const IndexSet& row_set,
                         std::size_t target_rows);

double frobenius(const DenseMatrix& m);

/// Elementwise product.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

/// Elementwise max(0, x).
DenseMatrix relu(DenseMatrix m);

}  // namespace nnmf
