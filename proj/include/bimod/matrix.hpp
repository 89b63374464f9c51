#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bimod/error.hpp"
#include "bimod/field.hpp"

namespace bimod {

/// Dense row-major matrix over an exact field. Vectors are n x 1 matrices
/// and a linear map V -> W is a dim W x dim V matrix acting on columns.
/// Zero-row and zero-column matrices are legal.
template <class K>
class Matrix {
 public:
  using Field = K;
  using Element = typename K::Element;

  Matrix() = default;
  Matrix(K field, std::size_t rows, std::size_t cols) : field_(std::move(field)), rows_(rows), cols_(cols) {
    if constexpr (std::is_same_v<Element, mpq_class>)
      data_.resize(rows * cols);
    else
      data_.assign(rows * cols, field_.zero());
  }

  static Matrix identity(const K& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  /// Column vector from a list of entries.
  static Matrix column(const K& field, std::span<const Element> entries) {
    Matrix m(field, entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, 0) = entries[i];
    return m;
  }

  /// Standard basis vector e_i of length n.
  static Matrix unit_vector(const K& field, std::size_t n, std::size_t i) {
    Matrix m(field, n, 1);
    m(i, 0) = field.one();
    return m;
  }

  /// Matrix whose rows are the given row vectors (each 1 x cols or cols x 1).
  static Matrix from_rows(const K& field, std::size_t cols, const std::vector<std::vector<Element>>& rows) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("ragged row list");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  const K& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Element& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Element& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Entry of a vector (either orientation).
  const Element& operator[](std::size_t i) const { return data_[i]; }
  Element& operator[](std::size_t i) { return data_[i]; }

  std::span<Element> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Element> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!bimod::is_zero(x)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix col(std::size_t j) const {
    Matrix c(field_, rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
  }

  void set_col(std::size_t j, const Matrix& v) {
    if (v.rows_ * v.cols_ != rows_) throw DimensionMismatch("set_col: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v.data_[i];
  }

  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix r(field_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(idx[i], j);
    return r;
  }

  Matrix select_cols(std::span<const std::size_t> idx) const {
    Matrix r(field_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(i, idx[j]);
    return r;
  }

  /// Row-major flattening as a column vector.
  Matrix vec() const {
    Matrix v(field_, rows_ * cols_, 1);
    v.data_ = data_;
    return v;
  }

  /// Inverse of vec(): reshapes a vector into a rows x cols matrix.
  static Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
    if (v.data_.size() != rows * cols) throw DimensionMismatch("unvec: length mismatch");
    Matrix m(v.field_, rows, cols);
    m.data_ = v.data_;
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!bimod::is_zero(o.data_[i])) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!bimod::is_zero(o.data_[i])) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const Element& s) {
    for (auto& x : data_)
      if (!bimod::is_zero(x)) x *= s;
    return *this;
  }

  /// this += s * o
  void add_scaled(const Element& s, const Matrix& o) {
    check_same_shape(o);
    if (bimod::is_zero(s)) return;
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!bimod::is_zero(o.data_[i])) add_mul(data_[i], s, o.data_[i]);
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_)
      if (!bimod::is_zero(x)) x = -x;
    return a;
  }
  friend Matrix operator*(const Element& s, Matrix a) { return a *= s; }

  /// Product skipping zero entries; cost is proportional to the nonzero pattern.
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("matrix product " + a.shape() + " * " + b.shape());
    Matrix c(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Element& aik = a(i, k);
        if (bimod::is_zero(aik)) continue;
        const Element* brow = b.data_.data() + k * b.cols_;
        Element* crow = c.data_.data() + i * c.cols_;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!bimod::is_zero(brow[j])) add_mul(crow[j], aik, brow[j]);
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m.field_.format(m(i, j));
      os << ']';
    }
    return os << ']';
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("shape " + shape() + " vs " + o.shape());
  }

  K field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

/// Kronecker product; index (i, j) of the factors maps to i * dim(b) + j.
template <class K>
Matrix<K> kron(const Matrix<K>& a, const Matrix<K>& b) {
  Matrix<K> r(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& aij = a(i, j);
      if (is_zero(aij)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (!is_zero(b(k, l))) r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

/// kron(a, b) * x without forming the Kronecker product.
template <class K>
Matrix<K> kron_times(const Matrix<K>& a, const Matrix<K>& b, const Matrix<K>& x) {
  if (x.rows() != a.cols() * b.cols())
    throw DimensionMismatch("kron_times: " + a.shape() + " (x) " + b.shape() + " against " + x.shape());
  Matrix<K> r(a.field(), a.rows() * b.rows(), x.cols());
  typename K::Element coef = a.field().zero();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) {
          if (is_zero(b(k, l))) continue;
          coef = a(i, j) * b(k, l);
          const auto src = j * b.cols() + l;
          const auto dst = i * b.rows() + k;
          for (std::size_t c = 0; c < x.cols(); ++c)
            if (!is_zero(x(src, c))) add_mul(r(dst, c), coef, x(src, c));
        }
    }
  return r;
}

/// x * kron(a, b) without forming the Kronecker product.
template <class K>
Matrix<K> times_kron(const Matrix<K>& x, const Matrix<K>& a, const Matrix<K>& b) {
  if (x.cols() != a.rows() * b.rows())
    throw DimensionMismatch("times_kron: " + x.shape() + " against " + a.shape() + " (x) " + b.shape());
  Matrix<K> r(a.field(), x.rows(), a.cols() * b.cols());
  typename K::Element coef = a.field().zero();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) {
          if (is_zero(b(k, l))) continue;
          coef = a(i, j) * b(k, l);
          const auto src = i * b.rows() + k;
          const auto dst = j * b.cols() + l;
          for (std::size_t row = 0; row < x.rows(); ++row)
            if (!is_zero(x(row, src))) add_mul(r(row, dst), coef, x(row, src));
        }
    }
  return r;
}

template <class K>
Matrix<K> hstack(const K& field, std::size_t rows, const std::vector<Matrix<K>>& blocks) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw DimensionMismatch("hstack: row count mismatch");
    cols += b.cols();
  }
  Matrix<K> r(field, rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, off + j) = b(i, j);
    off += b.cols();
  }
  return r;
}

template <class K>
Matrix<K> vstack(const K& field, std::size_t cols, const std::vector<Matrix<K>>& blocks) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw DimensionMismatch("vstack: column count mismatch");
    rows += b.rows();
  }
  Matrix<K> r(field, rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) r(off + i, j) = b(i, j);
    off += b.rows();
  }
  return r;
}

}  // namespace bimod
