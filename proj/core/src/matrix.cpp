#include "neuralnmf/matrix.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace nnmf {

namespace {

using EMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<const EMat>;

EMap emap(const DenseMatrix& m) {
  return EMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
              static_cast<Eigen::Index>(m.cols()));
}

DenseMatrix from_eigen(const Eigen::Ref<const EMat>& e) {
  DenseMatrix out(static_cast<std::size_t>(e.rows()),
                  static_cast<std::size_t>(e.cols()));
  Eigen::Map<EMat>(out.data().data(), e.rows(), e.cols()) = e;
  return out;
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch(std::string(op) + ": shapes " +
                        std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
}

}  // namespace

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t universe)
    : indices_(std::move(indices)), universe_(universe) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= universe_) {
      throw IndexOutOfRange("IndexSet: index " + std::to_string(indices_[i]) +
                            " outside universe " + std::to_string(universe_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw IndexOutOfRange("IndexSet: indices must be strictly increasing");
    }
  }
}

IndexSet IndexSet::all(std::size_t universe) {
  std::vector<std::size_t> idx(universe);
  for (std::size_t i = 0; i < universe; ++i) idx[i] = i;
  return IndexSet(std::move(idx), universe);
}

bool IndexSet::contains(std::size_t value) const {
  return std::binary_search(indices_.begin(), indices_.end(), value);
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw ShapeMismatch("DenseMatrix: ragged initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::column(const Vector& v) {
  DenseMatrix m(v.size(), 1);
  m.data() = v;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Vector DenseMatrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector DenseMatrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void DenseMatrix::set_col(std::size_t j, const Vector& v) {
  if (v.size() != rows_) throw ShapeMismatch("set_col: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

bool DenseMatrix::nonnegative(double tol) const {
  for (double x : data_)
    if (x < -tol) return false;
  return true;
}

double DenseMatrix::min() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double DenseMatrix::max() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double DenseMatrix::sum() const {
  double s = 0.0;
  for (double x : data_) s += x;
  return s;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data()[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data()[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double scalar) {
  for (double& x : data_) x *= scalar;
  return *this;
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.data() == b.data();
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("matmul: " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " * " +
                        std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
  if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) {
    return DenseMatrix(a.rows(), b.cols());
  }
  DenseMatrix out(a.rows(), b.cols());
  Eigen::Map<EMat>(out.data().data(), static_cast<Eigen::Index>(a.rows()),
                   static_cast<Eigen::Index>(b.cols())) = emap(a) * emap(b);
  return out;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
  a += b;
  return a;
}

DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
  a -= b;
  return a;
}

DenseMatrix operator*(double scalar, DenseMatrix m) {
  m *= scalar;
  return m;
}

Vector operator*(const DenseMatrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw ShapeMismatch("matvec: length mismatch");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Vector transpose_times(const DenseMatrix& a, const Vector& v) {
  if (a.rows() != v.size())
    throw ShapeMismatch("transpose_times: length mismatch");
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double vi = v[i];
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * vi;
  }
  return out;
}

DenseMatrix pinv(const DenseMatrix& m, double rank_tol) {
  if (m.empty()) throw ShapeMismatch("pinv: empty matrix");
  Eigen::JacobiSVD<EMat> svd(emap(m),
                             Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  if (smallest <= rank_tol * largest) {
    throw RankDeficient("pinv: singular value ratio " +
                        std::to_string(largest > 0 ? smallest / largest : 0.0) +
                        " at or below rank_tol");
  }
  EMat inv_sigma = EMat::Zero(sv.size(), sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) inv_sigma(i, i) = 1.0 / sv(i);
  EMat result = svd.matrixV() * inv_sigma * svd.matrixU().transpose();
  return from_eigen(result);
}

DenseMatrix restrict(const DenseMatrix& m,
                     const std::optional<IndexSet>& row_set,
                     const std::optional<IndexSet>& col_set) {
  if (row_set && row_set->universe() != m.rows()) {
    throw IndexOutOfRange("restrict: row set universe " +
                          std::to_string(row_set->universe()) +
                          " does not match rows " + std::to_string(m.rows()));
  }
  if (col_set && col_set->universe() != m.cols()) {
    throw IndexOutOfRange("restrict: col set universe " +
                          std::to_string(col_set->universe()) +
                          " does not match cols " + std::to_string(m.cols()));
  }
  const std::size_t out_rows = row_set ? row_set->size() : m.rows();
  const std::size_t out_cols = col_set ? col_set->size() : m.cols();
  DenseMatrix out(out_rows, out_cols);
  for (std::size_t i = 0; i < out_rows; ++i) {
    const std::size_t src_i = row_set ? (*row_set)[i] : i;
    for (std::size_t j = 0; j < out_cols; ++j) {
      const std::size_t src_j = col_set ? (*col_set)[j] : j;
      out(i, j) = m(src_i, src_j);
    }
  }
  return out;
}

DenseMatrix scatter_rows(const DenseMatrix& src, const IndexSet& row_set,
                         std::size_t target_rows) {
  if (src.rows() != row_set.size()) {
    throw ShapeMismatch("scatter_rows: src has " + std::to_string(src.rows()) +
                        " rows but set has " + std::to_string(row_set.size()) +
                        " indices");
  }
  if (row_set.universe() != target_rows) {
    throw ShapeMismatch("scatter_rows: set universe " +
                        std::to_string(row_set.universe()) +
                        " does not match target rows " +
                        std::to_string(target_rows));
  }
  DenseMatrix out(target_rows, src.cols());
  for (std::size_t i = 0; i < src.rows(); ++i) {
    const std::size_t dst = row_set[i];
    for (std::size_t j = 0; j < src.cols(); ++j) out(dst, j) = src(i, j);
  }
  return out;
}

double frobenius(const DenseMatrix& m) {
  double acc = 0.0;
  for (double x : m.data()) acc += x * x;
  return std::sqrt(acc);
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "hadamard");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] *= b.data()[i];
  return out;
}

DenseMatrix relu(DenseMatrix m) {
  for (double& x : m.data())
    if (x < 0.0) x = 0.0;
  return m;
}

}  // namespace nnmf
