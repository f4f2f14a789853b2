#include "thetalab/linalg.hpp"

#include <sstream>

#include "thetalab/error.hpp"

namespace thetalab {

QMatrix QMatrix::identity(size_t n) {
  QMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
  QMatrix r(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Rational& x = (*this)(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < o.cols_; ++j)
        if (o(k, j) != 0) r(i, j) += x * o(k, j);
    }
  return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  QMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  QMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

QMatrix QMatrix::scaled(const Rational& s) const {
  QMatrix r = *this;
  for (auto& x : r.a_) x *= s;
  return r;
}

QMatrix QMatrix::transpose() const {
  QMatrix r(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

bool QMatrix::operator==(const QMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

bool QMatrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

std::vector<Rational> QMatrix::row(size_t i) const {
  return std::vector<Rational>(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_));
}

std::vector<Rational> QMatrix::apply(const std::vector<Rational>& v) const {
  std::vector<Rational> r(rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (v[j] != 0 && (*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

std::vector<Rational> QMatrix::apply_left(const std::vector<Rational>& v) const {
  std::vector<Rational> r(cols_);
  for (size_t i = 0; i < rows_; ++i) {
    if (v[i] == 0) continue;
    for (size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) r[j] += v[i] * (*this)(i, j);
  }
  return r;
}

std::string QMatrix::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
    os << "]\n";
  }
  return os.str();
}

std::vector<size_t> rref(QMatrix& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rational inv = 1 / m(r, c);
    for (size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (size_t j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank(QMatrix m) { return rref(m).size(); }

std::vector<std::vector<Rational>> kernel(const QMatrix& m) {
  QMatrix e = m;
  const auto pivots = rref(e);
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(m.cols());
    v[f] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -e(i, f);
    basis.push_back(v);
  }
  return basis;
}

bool solve_in_span(const std::vector<std::vector<Rational>>& columns, const std::vector<Rational>& v,
                   std::vector<Rational>& x) {
  const size_t n = v.size(), k = columns.size();
  QMatrix aug(n, k + 1);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < n; ++i) aug(i, j) = columns[j][i];
  for (size_t i = 0; i < n; ++i) aug(i, k) = v[i];
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == k) return false;
  if (pivots.size() != k) return false;
  x.assign(k, Rational(0));
  for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, k);
  return true;
}

std::vector<Rational> primitive_integral(const std::vector<Rational>& v) {
  Integer den = 1, num = 0;
  for (const auto& x : v) {
    if (x == 0) continue;
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
  }
  for (const auto& x : v) {
    if (x == 0) continue;
    Integer n = x.get_num() * (den / x.get_den());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
  }
  if (num == 0) throw Error(ErrorKind::InvalidArgument, "zero vector has no primitive scaling");
  Rational s(den, num);
  s.canonicalize();
  for (const auto& x : v)
    if (x != 0) {
      if (x < 0) s = -s;
      break;
    }
  std::vector<Rational> r = v;
  for (auto& x : r) x *= s;
  return r;
}

}  // namespace thetalab
