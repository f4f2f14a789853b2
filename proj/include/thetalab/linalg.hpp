#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "thetalab/rational.hpp"

namespace thetalab {

/// Dense row-major matrix over Q.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static QMatrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rational& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QMatrix scaled(const Rational& s) const;
  QMatrix transpose() const;
  bool operator==(const QMatrix& o) const;
  bool is_zero() const;

  std::vector<Rational> row(size_t i) const;
  std::vector<Rational> apply(const std::vector<Rational>& v) const;        // M v
  std::vector<Rational> apply_left(const std::vector<Rational>& v) const;   // v M

  std::string to_string() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<size_t> rref(QMatrix& m);

size_t rank(QMatrix m);

/// Basis of the right kernel {v : M v = 0}, one vector per free column.
std::vector<std::vector<Rational>> kernel(const QMatrix& m);

/// Solves B x = v for x when the columns of B are independent and v lies in
/// their span; returns false otherwise.
bool solve_in_span(const std::vector<std::vector<Rational>>& columns, const std::vector<Rational>& v,
                   std::vector<Rational>& x);

/// Scales a nonzero rational vector to a primitive integral vector whose
/// first nonzero entry is positive.
std::vector<Rational> primitive_integral(const std::vector<Rational>& v);

}  // namespace thetalab
