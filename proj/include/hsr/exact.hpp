#pragma once

/**
 * @file
 * @brief Exact rational scalars, dense rational matrices and fraction-free elimination.
 */

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hsr/errors.hpp"

namespace hsr {

using Rational = mpq_class;
using QVector  = std::vector<Rational>;

/// Thrown on malformed numeric text or dimension mismatches in exact routines.
class ExactError : public Error
{
public:
  using Error::Error;
};

inline double to_double(const Rational & q) { return q.get_d(); }

/// Exact binary value of a finite double.
inline Rational from_double(double x)
{
  if (!std::isfinite(x)) { throw ExactError("non-finite value has no rational form"); }
  Rational q(x);
  q.canonicalize();
  return q;
}

/// Parses "3", "-7/2", "0.25" or "1e-3". Decimal text is read exactly in base ten.
inline Rational parse_rational(std::string_view text)
{
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) { throw ExactError("empty rational literal"); }
  try {
    if (s.find('/') != std::string::npos) {
      Rational q(s, 10);
      if (q.get_den() == 0) { throw ExactError("zero denominator in '" + s + "'"); }
      q.canonicalize();
      return q;
    }
    const auto epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10       = epos == std::string::npos ? 0 : std::stol(s.substr(epos + 1));
    bool neg         = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant.erase(0, 1);
    }
    const auto dot = mant.find('.');
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(mant.size() - dot - 1);
      mant.erase(dot, 1);
    }
    if (mant.empty() || !std::all_of(mant.begin(), mant.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw ExactError("malformed rational literal '" + std::string(text) + "'");
    }
    mpz_class num(mant, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    Rational q = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  } catch (const std::invalid_argument &) {
    throw ExactError("malformed rational literal '" + std::string(text) + "'");
  }
}

inline std::string to_string(const Rational & q) { return q.get_str(); }

inline QVector zero_qvector(std::size_t n) { return QVector(n, Rational(0)); }

inline QVector unit_qvector(std::size_t n, std::size_t i)
{
  QVector v = zero_qvector(n);
  v[i]      = 1;
  return v;
}

inline bool is_zero(const QVector & v)
{
  return std::all_of(v.begin(), v.end(), [](const Rational & q) { return sgn(q) == 0; });
}

inline Eigen::VectorXd to_eigen(const QVector & v)
{
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) { out[static_cast<Eigen::Index>(i)] = to_double(v[i]); }
  return out;
}

inline QVector from_eigen(const Eigen::VectorXd & v)
{
  QVector out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) { out[static_cast<std::size_t>(i)] = from_double(v[i]); }
  return out;
}

inline Rational dot(const QVector & a, const QVector & b)
{
  if (a.size() != b.size()) { throw ExactError("dot: dimension mismatch"); }
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) { s += a[i] * b[i]; }
  }
  return s;
}

/// Dense row-major rational matrix.
class QMatrix
{
public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static QMatrix identity(std::size_t n)
  {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) { m(i, i) = 1; }
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static QMatrix from_columns(const std::vector<QVector> & cols, std::size_t rows)
  {
    QMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) { throw ExactError("from_columns: inconsistent vector length"); }
      for (std::size_t i = 0; i < rows; ++i) { m(i, j) = cols[j][i]; }
    }
    return m;
  }

  static QMatrix from_rows(const std::vector<QVector> & rows, std::size_t cols)
  {
    QMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) { throw ExactError("from_rows: inconsistent vector length"); }
      for (std::size_t j = 0; j < cols; ++j) { m(i, j) = rows[i][j]; }
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational & operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational & operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVector row(std::size_t i) const { return QVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_), data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)); }

  QVector col(std::size_t j) const
  {
    QVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) { c[i] = (*this)(i, j); }
    return c;
  }

  QMatrix transpose() const
  {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) { t(j, i) = (*this)(i, j); }
    }
    return t;
  }

  QMatrix operator*(const QMatrix & o) const
  {
    if (cols_ != o.rows_) { throw ExactError("matrix product: dimension mismatch"); }
    QMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rational & a = (*this)(i, k);
        if (sgn(a) == 0) { continue; }
        for (std::size_t j = 0; j < o.cols_; ++j) {
          if (sgn(o(k, j)) != 0) { r(i, j) += a * o(k, j); }
        }
      }
    }
    return r;
  }

  QVector operator*(const QVector & v) const
  {
    if (cols_ != v.size()) { throw ExactError("matrix-vector product: dimension mismatch"); }
    QVector r = zero_qvector(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (sgn((*this)(i, j)) != 0 && sgn(v[j]) != 0) { r[i] += (*this)(i, j) * v[j]; }
      }
    }
    return r;
  }

  QMatrix operator+(const QMatrix & o) const
  {
    check_same(o);
    QMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) { r.data_[i] += o.data_[i]; }
    return r;
  }

  QMatrix operator-(const QMatrix & o) const
  {
    check_same(o);
    QMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) { r.data_[i] -= o.data_[i]; }
    return r;
  }

  bool operator==(const QMatrix & o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  bool is_zero() const
  {
    return std::all_of(data_.begin(), data_.end(), [](const Rational & q) { return sgn(q) == 0; });
  }

  bool is_symmetric() const
  {
    if (rows_ != cols_) { return false; }
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = i + 1; j < cols_; ++j) {
        if ((*this)(i, j) != (*this)(j, i)) { return false; }
      }
    }
    return true;
  }

  Eigen::MatrixXd to_eigen() const
  {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) { m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double((*this)(i, j)); }
    }
    return m;
  }

private:
  void check_same(const QMatrix & o) const
  {
    if (rows_ != o.rows_ || cols_ != o.cols_) { throw ExactError("matrix sum: dimension mismatch"); }
  }

  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<Rational> data_;
};

/// Reduced row echelon form together with its pivot columns.
struct Echelon
{
  QMatrix reduced;
  std::vector<std::size_t> pivots;

  std::size_t rank() const { return pivots.size(); }
};

namespace detail {

inline void primitive_row(std::vector<mpz_class> & row)
{
  mpz_class g = 0;
  for (const auto & x : row) {
    if (x != 0) { mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t()); }
  }
  if (g > 1) {
    for (auto & x : row) {
      if (x != 0) { mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t()); }
    }
  }
}

}  // namespace detail

/**
 * @brief Fraction-free Gauss-Jordan elimination.
 *
 * Each row is scaled to a primitive integer vector, eliminated with integer
 * cross-multiplication and kept primitive by content removal. Only the final
 * normalisation divides by the pivots.
 */
inline Echelon rref(const QMatrix & a)
{
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::vector<mpz_class>> rows(m, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < m; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(a(i, j)) != 0) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t()); }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(a(i, j)) != 0) { rows[i][j] = a(i, j).get_num() * (l / a(i, j).get_den()); }
    }
    detail::primitive_row(rows[i]);
  }

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    // smallest nonzero magnitude keeps growth down
    std::size_t best = m;
    for (std::size_t i = r; i < m; ++i) {
      if (rows[i][c] != 0 && (best == m || abs(rows[i][c]) < abs(rows[best][c]))) { best = i; }
    }
    if (best == m) { continue; }
    std::swap(rows[r], rows[best]);
    const mpz_class piv = rows[r][c];
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || rows[i][c] == 0) { continue; }
      const mpz_class f = rows[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        if (rows[r][j] == 0 && rows[i][j] == 0) { continue; }
        rows[i][j] = piv * rows[i][j] - f * rows[r][j];
      }
      detail::primitive_row(rows[i]);
    }
    pivots.push_back(c);
    ++r;
  }

  Echelon e{QMatrix(r, n), pivots};
  for (std::size_t i = 0; i < r; ++i) {
    const mpz_class & piv = rows[i][pivots[i]];
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] != 0) {
        Rational q(rows[i][j], piv);
        q.canonicalize();
        e.reduced(i, j) = q;
      }
    }
  }
  return e;
}

inline std::size_t rank(const QMatrix & a) { return rref(a).rank(); }

/// Basis of {x : a x = 0}; one vector per free column, with a 1 in that column.
inline std::vector<QVector> nullspace(const QMatrix & a)
{
  const Echelon e = rref(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) { is_pivot[p] = true; }
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) { continue; }
    QVector v = zero_qvector(n);
    v[f]      = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) { v[e.pivots[i]] = -e.reduced(i, f); }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Exact inverse; throws on a singular matrix.
inline QMatrix inverse(const QMatrix & a)
{
  if (a.rows() != a.cols()) { throw ExactError("inverse: matrix not square"); }
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) { aug(i, j) = a(i, j); }
    aug(i, n + i) = 1;
  }
  const Echelon e = rref(aug);
  if (e.rank() < n || e.pivots[n - 1] != n - 1) { throw ExactError("inverse: matrix is singular"); }
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) { inv(i, j) = e.reduced(i, n + j); }
  }
  return inv;
}

/// Some exact solution of a x = b, or nothing when the system is inconsistent.
inline std::optional<QVector> solve(const QMatrix & a, const QVector & b)
{
  if (a.rows() != b.size()) { throw ExactError("solve: dimension mismatch"); }
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) { aug(i, j) = a(i, j); }
    aug(i, a.cols()) = b[i];
  }
  const Echelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) { return std::nullopt; }
  QVector x = zero_qvector(a.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) { x[e.pivots[i]] = e.reduced(i, a.cols()); }
  return x;
}

/// Positive definiteness of a symmetric matrix via exact LDLᵀ pivots.
inline bool is_positive_definite(const QMatrix & a)
{
  if (!a.is_symmetric()) { return false; }
  const std::size_t n = a.rows();
  QMatrix w = a;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(w(k, k)) <= 0) { return false; }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(w(i, k)) == 0) { continue; }
      const Rational f = w(i, k) / w(k, k);
      for (std::size_t j = k; j < n; ++j) { w(i, j) -= f * w(k, j); }
    }
  }
  return true;
}

/// Numerical rank: singular values below rel_tol times the largest count as zero.
inline Eigen::Index numeric_rank(const Eigen::MatrixXd & a, double rel_tol = 1e-10)
{
  if (a.size() == 0) { return 0; }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto & s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) { return 0; }
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) { ++r; }
  }
  return r;
}

}  // namespace hsr
