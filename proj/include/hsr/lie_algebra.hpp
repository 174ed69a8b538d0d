#pragma once

/**
 * @file
 * @brief Finite-dimensional Lie algebras given by structure constants.
 */

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "hsr/exact.hpp"
#include "hsr/subspace.hpp"

namespace hsr {

/**
 * @brief Lie algebra with exact structure constants c[i][j][k] and a double mirror.
 *
 * c[i][j][k] is the coefficient of e_k in [e_i, e_j]. The constants are stored as
 * given; antisymmetry and the Jacobi identity are checked by validate(), not
 * enforced, so that broken inputs can be reported.
 */
class LieAlgebra
{
public:
  struct Constant
  {
    std::size_t i, j, k;
    Rational value;
  };

  LieAlgebra() = default;

  LieAlgebra(std::size_t dim, const std::vector<Constant> & constants, std::vector<std::string> labels = {})
      : dim_(dim), labels_(std::move(labels))
  {
    if (dim_ == 0) { throw DimensionError("Lie algebra dimension must be positive"); }
    if (labels_.empty()) {
      for (std::size_t i = 0; i < dim_; ++i) { labels_.push_back("e" + std::to_string(i + 1)); }
    }
    if (labels_.size() != dim_) { throw DimensionError("label count differs from dimension"); }
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> merged;
    for (const auto & c : constants) {
      if (c.i >= dim_ || c.j >= dim_ || c.k >= dim_) { throw DimensionError("structure constant index out of range"); }
      merged[{c.i, c.j, c.k}] += c.value;
    }
    by_first_.assign(dim_, {});
    for (const auto & [key, v] : merged) {
      if (sgn(v) == 0) { continue; }
      const auto [i, j, k] = key;
      by_first_[i].push_back(terms_.size());
      terms_.push_back({i, j, k, v});
      fterms_.push_back({i, j, k, to_double(v)});
    }
  }

  /// Builds an antisymmetric algebra from the brackets [e_i, e_j] listed for i < j.
  static LieAlgebra from_brackets(std::size_t dim, const std::vector<std::tuple<std::size_t, std::size_t, QVector>> & brackets,
    std::vector<std::string> labels = {})
  {
    std::vector<Constant> cs;
    for (const auto & [i, j, v] : brackets) {
      if (v.size() != dim) { throw DimensionError("bracket value has wrong length"); }
      for (std::size_t k = 0; k < dim; ++k) {
        if (sgn(v[k]) == 0) { continue; }
        cs.push_back({i, j, k, v[k]});
        cs.push_back({j, i, k, -v[k]});
      }
    }
    return LieAlgebra(dim, cs, std::move(labels));
  }

  std::size_t dim() const { return dim_; }
  const std::vector<std::string> & labels() const { return labels_; }
  const std::vector<Constant> & constants() const { return terms_; }

  Rational constant(std::size_t i, std::size_t j, std::size_t k) const
  {
    for (const auto & t : terms_) {
      if (t.i == i && t.j == j && t.k == k) { return t.value; }
    }
    return 0;
  }

  QVector bracket(const QVector & a, const QVector & b) const
  {
    check(a.size());
    check(b.size());
    QVector r = zero_qvector(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (sgn(a[i]) == 0) { continue; }
      for (auto ti : by_first_[i]) {
        const auto & t = terms_[ti];
        if (sgn(b[t.j]) != 0) { r[t.k] += t.value * a[i] * b[t.j]; }
      }
    }
    return r;
  }

  Eigen::VectorXd bracket(const Eigen::VectorXd & a, const Eigen::VectorXd & b) const
  {
    check(static_cast<std::size_t>(a.size()));
    check(static_cast<std::size_t>(b.size()));
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    for (const auto & t : fterms_) { r[idx(t.k)] += t.value * a[idx(t.i)] * b[idx(t.j)]; }
    return r;
  }

  QVector bracket_basis(std::size_t i, std::size_t j) const { return bracket(unit_qvector(dim_, i), unit_qvector(dim_, j)); }

  /// Column j is [x, e_j].
  Eigen::MatrixXd ad_matrix(const Eigen::VectorXd & x) const
  {
    check(static_cast<std::size_t>(x.size()));
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto & t : fterms_) { m(idx(t.k), idx(t.j)) += t.value * x[idx(t.i)]; }
    return m;
  }

  QMatrix ad_matrix(const QVector & x) const
  {
    check(x.size());
    QMatrix m(dim_, dim_);
    for (const auto & t : terms_) {
      if (sgn(x[t.i]) != 0) { m(t.k, t.j) += t.value * x[t.i]; }
    }
    return m;
  }

  /// The covector ξ ↦ p([x, ξ]).
  Eigen::VectorXd coad_apply(const Eigen::VectorXd & x, const Eigen::VectorXd & p) const
  {
    check(static_cast<std::size_t>(x.size()));
    check(static_cast<std::size_t>(p.size()));
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    for (const auto & t : fterms_) { r[idx(t.j)] += t.value * x[idx(t.i)] * p[idx(t.k)]; }
    return r;
  }

  QVector coad_apply(const QVector & x, const QVector & p) const
  {
    check(x.size());
    check(p.size());
    QVector r = zero_qvector(dim_);
    for (const auto & t : terms_) {
      if (sgn(x[t.i]) != 0 && sgn(p[t.k]) != 0) { r[t.j] += t.value * x[t.i] * p[t.k]; }
    }
    return r;
  }

private:
  struct FConstant
  {
    std::size_t i, j, k;
    double value;
  };

  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

  void check(std::size_t n) const
  {
    if (n != dim_) {
      std::ostringstream os;
      os << "vector of length " << n << " used with a " << dim_ << "-dimensional algebra";
      throw DimensionError(os.str());
    }
  }

  std::size_t dim_{0};
  std::vector<std::string> labels_;
  std::vector<Constant> terms_;
  std::vector<FConstant> fterms_;
  std::vector<std::vector<std::size_t>> by_first_;
};

/// One violated identity, with 0-based indices.
struct Violation
{
  enum class Kind { antisymmetry, jacobi };
  Kind kind;
  std::size_t i, j, l, k;
  Rational value;

  std::string describe() const
  {
    std::ostringstream os;
    if (kind == Kind::antisymmetry) {
      os << "antisymmetry violated at (" << i + 1 << "," << j + 1 << "," << k + 1 << "): c[i][j][k] + c[j][i][k] = " << value.get_str();
    } else {
      os << "Jacobi identity violated for (" << i + 1 << "," << j + 1 << "," << l + 1 << ") in component " << k + 1 << ": sum = " << value.get_str();
    }
    return os.str();
  }
};

struct ValidationReport
{
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// Exact antisymmetry and Jacobi checks over every index combination.
inline ValidationReport validate(const LieAlgebra & g)
{
  ValidationReport rep;
  const std::size_t n = g.dim();
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> c;
  for (const auto & t : g.constants()) { c[{t.i, t.j, t.k}] = t.value; }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Rational s = 0;
        if (auto it = c.find({i, j, k}); it != c.end()) { s += it->second; }
        if (auto it = c.find({j, i, k}); it != c.end()) { s += it->second; }
        if (sgn(s) != 0) { rep.violations.push_back({Violation::Kind::antisymmetry, i, j, 0, k, s}); }
      }
    }
  }
  std::vector<QVector> basis;
  for (std::size_t i = 0; i < n; ++i) { basis.push_back(unit_qvector(n, i)); }
  std::vector<std::vector<QVector>> br(n, std::vector<QVector>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) { br[i][j] = g.bracket(basis[i], basis[j]); }
  }
  // With antisymmetric constants the Jacobi sum is alternating in (i, j, l).
  const bool alternating = rep.valid();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = alternating ? i + 1 : 0; j < n; ++j) {
      for (std::size_t l = alternating ? j + 1 : 0; l < n; ++l) {
        QVector s = g.bracket(br[i][j], basis[l]);
        const QVector b = g.bracket(br[j][l], basis[i]);
        const QVector d = g.bracket(br[l][i], basis[j]);
        for (std::size_t k = 0; k < n; ++k) {
          s[k] += b[k] + d[k];
          if (sgn(s[k]) != 0) { rep.violations.push_back({Violation::Kind::jacobi, i, j, l, k, s[k]}); }
        }
      }
    }
  }
  return rep;
}

/// K[i][j] = trace(ad e_i ∘ ad e_j), exact.
inline QMatrix killing_form(const LieAlgebra & g)
{
  const std::size_t n = g.dim();
  std::vector<QMatrix> ad;
  for (std::size_t i = 0; i < n; ++i) { ad.push_back(g.ad_matrix(unit_qvector(n, i))); }
  QMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Rational tr = 0;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (sgn(ad[i](a, b)) != 0 && sgn(ad[j](b, a)) != 0) { tr += ad[i](a, b) * ad[j](b, a); }
        }
      }
      k(i, j) = tr;
      k(j, i) = tr;
    }
  }
  return k;
}

inline Subspace killing_kernel(const LieAlgebra & g) { return Subspace::span(nullspace(killing_form(g)), g.dim()); }

/// Span of all [u, w] for u in U, w in W.
inline Subspace bracket_span(const LieAlgebra & g, const Subspace & u, const Subspace & w)
{
  std::vector<QVector> vs;
  for (const auto & a : u.basis()) {
    for (const auto & b : w.basis()) { vs.push_back(g.bracket(a, b)); }
  }
  return Subspace::span(vs, g.dim());
}

inline bool is_subalgebra(const LieAlgebra & g, const Subspace & s) { return s.contains(bracket_span(g, s, s)); }

inline bool is_ideal(const LieAlgebra & g, const Subspace & s) { return s.contains(bracket_span(g, Subspace::whole(g.dim()), s)); }

/// Smallest subalgebra containing the given subspace.
inline Subspace generated_subalgebra(const LieAlgebra & g, const Subspace & s)
{
  Subspace cur = s;
  while (true) {
    Subspace next = cur + bracket_span(g, cur, cur);
    if (next.dim() == cur.dim()) { return cur; }
    cur = next;
  }
}

}  // namespace hsr
