#pragma once

// Small dense vectors/matrices over Rational.  Dimensions are fixed at
// construction; element access is bounds-checked.

#include <zv/rational.hpp>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace zv {

class RVector {
public:
  RVector() = default;
  explicit RVector(std::size_t n) : e_(n) {}
  RVector(std::initializer_list<Rational> xs) : e_(xs) {}

  std::size_t size() const { return e_.size(); }
  Rational& operator[](std::size_t i) { return e_.at(i); }
  const Rational& operator[](std::size_t i) const { return e_.at(i); }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend bool operator==(const RVector& a, const RVector& b) { return a.e_ == b.e_; }
  friend bool operator!=(const RVector& a, const RVector& b) { return !(a == b); }

  // Lexicographic order, used for deterministic tie-breaking.
  friend bool operator<(const RVector& a, const RVector& b) {
    std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] < b[i]) return true;
      if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
  }

  RVector& operator+=(const RVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  RVector& operator-=(const RVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  RVector& operator*=(const Rational& c) {
    for (auto& x : e_) x *= c;
    return *this;
  }
  friend RVector operator+(RVector a, const RVector& b) { return a += b; }
  friend RVector operator-(RVector a, const RVector& b) { return a -= b; }
  friend RVector operator*(const Rational& c, RVector a) { return a *= c; }
  friend RVector operator-(const RVector& a) {
    RVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
  }

private:
  void check_same(const RVector& o) const {
    if (o.size() != size()) throw input_error("RVector: dimension mismatch");
  }
  std::vector<Rational> e_;
};

inline Rational dot(const RVector& a, const RVector& b) {
  if (a.size() != b.size()) throw input_error("dot: dimension mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class RMatrix {
public:
  RMatrix() : rows_(0), cols_(0) {}
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return e_.at(idx(i, j)); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return e_.at(idx(i, j)); }

  RVector row(std::size_t i) const {
    RVector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }
  RVector col(std::size_t j) const {
    RVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  friend bool operator==(const RMatrix& a, const RMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

private:
  std::size_t idx(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw input_error("RMatrix: index out of range");
    return i * cols_ + j;
  }
  std::size_t rows_, cols_;
  std::vector<Rational> e_;
};

inline RVector matvec(const RMatrix& m, const RVector& x) {
  if (m.cols() != x.size()) throw input_error("matvec: dimension mismatch");
  RVector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational s;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// Rank by Gaussian elimination with exact pivoting.
inline std::size_t matrix_rank(RMatrix a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c).is_zero()) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(piv, j));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c).is_zero()) continue;
      Rational f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

// Indices of a maximal independent column subset, in increasing order.
inline std::vector<std::size_t> independent_columns(const RMatrix& a) {
  RMatrix w = a;
  std::vector<std::size_t> picked;
  std::size_t r = 0;
  for (std::size_t c = 0; c < w.cols() && r < w.rows(); ++c) {
    std::size_t piv = r;
    while (piv < w.rows() && w(piv, c).is_zero()) ++piv;
    if (piv == w.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < w.cols(); ++j) std::swap(w(r, j), w(piv, j));
    for (std::size_t i = r + 1; i < w.rows(); ++i) {
      if (w(i, c).is_zero()) continue;
      Rational f = w(i, c) / w(r, c);
      for (std::size_t j = c; j < w.cols(); ++j) w(i, j) -= f * w(r, j);
    }
    picked.push_back(c);
    ++r;
  }
  return picked;
}

} // namespace zv
