#pragma once

/**
 * @file
 * @brief Sparse multivariate polynomials with exact or floating coefficients.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "hsr/exact.hpp"

namespace hsr {

using Exponents = std::vector<std::uint16_t>;

/// Higher total degree first, then lexicographically larger exponents first.
struct GradedLexDescending
{
  bool operator()(const Exponents & a, const Exponents & b) const
  {
    unsigned da = 0, db = 0;
    for (auto e : a) { da += e; }
    for (auto e : b) { db += e; }
    if (da != db) { return da > db; }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

namespace detail {

inline bool coeff_is_zero(const Rational & c) { return sgn(c) == 0; }
inline bool coeff_is_zero(double c) { return c == 0.0; }
inline double coeff_to_double(const Rational & c) { return to_double(c); }
inline double coeff_to_double(double c) { return c; }

}  // namespace detail

template<class Coeff>
class Polynomial
{
public:
  using TermMap = std::map<Exponents, Coeff, GradedLexDescending>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Coeff & c)
  {
    Polynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i, const Coeff & c = Coeff(1))
  {
    if (i >= nvars) { throw DimensionError("polynomial variable index out of range"); }
    Exponents e(nvars, 0);
    e[i] = 1;
    Polynomial p(nvars);
    p.add_term(e, c);
    return p;
  }

  /// Linear form Σ c_i x_i.
  static Polynomial linear(const std::vector<Coeff> & c)
  {
    Polynomial p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!detail::coeff_is_zero(c[i])) { p += variable(c.size(), i, c[i]); }
    }
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap & terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  int degree() const
  {
    int d = -1;
    for (const auto & [e, c] : terms_) {
      int s = 0;
      for (auto x : e) { s += x; }
      d = std::max(d, s);
    }
    return d;
  }

  Coeff coefficient(const Exponents & e) const
  {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(const Exponents & e, const Coeff & c)
  {
    if (e.size() != nvars_) { throw DimensionError("monomial has wrong number of variables"); }
    if (detail::coeff_is_zero(c)) { return; }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (detail::coeff_is_zero(it->second)) { terms_.erase(it); }
    }
  }

  Polynomial & operator+=(const Polynomial & o)
  {
    check(o);
    for (const auto & [e, c] : o.terms_) { add_term(e, c); }
    return *this;
  }

  Polynomial & operator-=(const Polynomial & o)
  {
    check(o);
    for (const auto & [e, c] : o.terms_) { add_term(e, Coeff(-c)); }
    return *this;
  }

  Polynomial & operator*=(const Coeff & s)
  {
    if (detail::coeff_is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto & [e, c] : terms_) { c *= s; }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial & b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial & b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Coeff & s) { return a *= s; }
  friend Polynomial operator*(const Coeff & s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * Coeff(-1); }

  friend Polynomial operator*(const Polynomial & a, const Polynomial & b)
  {
    a.check(b);
    Polynomial r(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto & [ea, ca] : a.terms_) {
      for (const auto & [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.nvars_; ++i) { e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]); }
        r.add_term(e, Coeff(ca * cb));
      }
    }
    return r;
  }

  bool operator==(const Polynomial & o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial derivative(std::size_t i) const
  {
    if (i >= nvars_) { throw DimensionError("derivative variable out of range"); }
    Polynomial r(nvars_);
    for (const auto & [e, c] : terms_) {
      if (e[i] == 0) { continue; }
      Exponents d = e;
      --d[i];
      r.add_term(d, Coeff(c * Coeff(e[i])));
    }
    return r;
  }

  double evaluate(const Eigen::VectorXd & x) const
  {
    if (static_cast<std::size_t>(x.size()) != nvars_) { throw DimensionError("evaluation point has wrong length"); }
    double s = 0.0;
    for (const auto & [e, c] : terms_) {
      double t = detail::coeff_to_double(c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        for (std::uint16_t k = 0; k < e[i]; ++k) { t *= x[static_cast<Eigen::Index>(i)]; }
      }
      s += t;
    }
    return s;
  }

  template<class C = Coeff>
    requires std::is_same_v<C, Rational>
  Rational evaluate_exact(const QVector & x) const
  {
    if (x.size() != nvars_) { throw DimensionError("evaluation point has wrong length"); }
    Rational s = 0;
    for (const auto & [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < nvars_; ++i) {
        for (std::uint16_t k = 0; k < e[i]; ++k) { t *= x[i]; }
      }
      s += t;
    }
    return s;
  }

  /**
   * @brief Composition with a linear change of variables.
   *
   * Old variable i becomes Σ_j map[i][j]·y_j in the new variables y; `map` has
   * one row per old variable.
   */
  Polynomial substitute_linear(const std::vector<std::vector<Coeff>> & map, std::size_t new_nvars) const
  {
    if (map.size() != nvars_) { throw DimensionError("substitution needs one row per variable"); }
    std::vector<Polynomial> images;
    for (const auto & row : map) {
      if (row.size() != new_nvars) { throw DimensionError("substitution row has wrong length"); }
      images.push_back(linear(row));
    }
    Polynomial r(new_nvars);
    for (const auto & [e, c] : terms_) {
      Polynomial t = constant(new_nvars, c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        for (std::uint16_t k = 0; k < e[i]; ++k) { t = t * images[i]; }
      }
      r += t;
    }
    return r;
  }

  Polynomial<double> to_double_poly() const
  {
    Polynomial<double> r(nvars_);
    for (const auto & [e, c] : terms_) { r.add_term(e, detail::coeff_to_double(c)); }
    return r;
  }

  /// Text such as "p1^2 + p2^2 - 1/2*p3"; variables are prefix1..prefixN.
  std::string to_string(std::string_view prefix = "p") const
  {
    if (terms_.empty()) { return "0"; }
    std::ostringstream os;
    bool first = true;
    for (const auto & [e, c] : terms_) {
      const bool neg = c < Coeff(0);
      const Coeff mag = neg ? Coeff(-c) : c;
      if (first) {
        if (neg) { os << "-"; }
      } else {
        os << (neg ? " - " : " + ");
      }
      first = true;
      bool constant_term = std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
      const bool unit = mag == Coeff(1);
      if (!unit || constant_term) {
        os << coeff_text(mag);
        if (!constant_term) { os << "*"; }
      }
      bool first_factor = true;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i] == 0) { continue; }
        if (!first_factor) { os << "*"; }
        os << prefix << (i + 1);
        if (e[i] > 1) { os << "^" << e[i]; }
        first_factor = false;
      }
      first = false;
    }
    return os.str();
  }

private:
  static std::string coeff_text(const Rational & c) { return c.get_str(); }
  static std::string coeff_text(double c)
  {
    std::ostringstream os;
    os.precision(17);
    os << c;
    return os.str();
  }

  void check(const Polynomial & o) const
  {
    if (o.nvars_ != nvars_) { throw DimensionError("polynomials have different variable counts"); }
  }

  std::size_t nvars_;
  TermMap terms_;
};

using QPolynomial = Polynomial<Rational>;

namespace detail {

class PolynomialParser
{
public:
  PolynomialParser(std::string_view text, std::size_t nvars, std::string_view prefix) : s_(text), n_(nvars), prefix_(prefix) {}

  QPolynomial parse()
  {
    QPolynomial p = expr();
    skip();
    if (pos_ != s_.size()) { fail("unexpected character"); }
    return p;
  }

private:
  [[noreturn]] void fail(const std::string & what) const
  {
    std::ostringstream os;
    os << "polynomial parse error at offset " << pos_ << " in '" << s_ << "': " << what;
    throw ExactError(os.str());
  }

  void skip()
  {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) { ++pos_; }
  }

  bool eat(char c)
  {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  QPolynomial expr()
  {
    QPolynomial p = term();
    while (true) {
      if (eat('+')) {
        p += term();
      } else if (eat('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  QPolynomial term()
  {
    QPolynomial p = factor();
    while (true) {
      if (eat('*')) {
        p = p * factor();
      } else if (eat('/')) {
        QPolynomial d = factor();
        if (d.degree() > 0 || d.is_zero()) { fail("division by a non-constant or zero"); }
        p *= Rational(1) / d.coefficient(Exponents(n_, 0));
      } else {
        return p;
      }
    }
  }

  QPolynomial factor()
  {
    if (eat('-')) { return -factor(); }
    if (eat('+')) { return factor(); }
    QPolynomial base = primary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) { ++pos_; }
      if (start == pos_) { fail("expected exponent"); }
      const int k = std::stoi(std::string(s_.substr(start, pos_ - start)));
      QPolynomial r = QPolynomial::constant(n_, 1);
      for (int i = 0; i < k; ++i) { r = r * base; }
      return r;
    }
    return base;
  }

  QPolynomial primary()
  {
    skip();
    if (eat('(')) {
      QPolynomial p = expr();
      if (!eat(')')) { fail("expected ')'"); }
      return p;
    }
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) { ++pos_; }
      return QPolynomial::constant(n_, parse_rational(s_.substr(start, pos_ - start)));
    }
    if (s_.substr(pos_, prefix_.size()) == prefix_) {
      pos_ += prefix_.size();
      if (pos_ < s_.size() && s_[pos_] == '_') { ++pos_; }
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) { ++pos_; }
      if (start == pos_) { fail("expected variable index"); }
      const auto idx = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (idx < 1 || idx > n_) { fail("variable index out of range"); }
      return QPolynomial::variable(n_, idx - 1);
    }
    fail("expected number, variable or '('");
  }

  std::string_view s_;
  std::size_t n_;
  std::string_view prefix_;
  std::size_t pos_{0};
};

}  // namespace detail

/// Parses text like "1/2*p3^2 + p1*p5 - p2*p4" over nvars variables.
inline QPolynomial parse_polynomial(std::string_view text, std::size_t nvars, std::string_view prefix = "p")
{
  return detail::PolynomialParser(text, nvars, prefix).parse();
}

}  // namespace hsr
