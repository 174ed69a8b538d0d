#pragma once

/**
 * @file
 * @brief Normal Hamiltonian, its differential, the vertical vector field and Lie-Poisson brackets.
 */

#include <Eigen/Dense>

#include "hsr/exact.hpp"
#include "hsr/lie_algebra.hpp"
#include "hsr/polynomial.hpp"
#include "hsr/structure.hpp"

namespace hsr {

/// H(p) = ½ qᵀB⁻¹q with q the values of p on the distribution basis.
inline double hamiltonian_value(const HomogeneousStructure & s, const Eigen::VectorXd & p)
{
  const Eigen::VectorXd q = s.delta_values(p);
  return 0.5 * q.dot(s.metric_inverse_d() * q);
}

inline Rational hamiltonian_value(const HomogeneousStructure & s, const QVector & p)
{
  const auto & d = s.distribution().basis();
  QVector q(d.size());
  for (std::size_t a = 0; a < d.size(); ++a) { q[a] = dot(d[a], p); }
  return Rational(dot(q, s.metric_inverse() * q) / 2);
}

/// B⁻¹(p|Δ) as a vector of g supported on the distribution.
inline Eigen::VectorXd dH(const HomogeneousStructure & s, const Eigen::VectorXd & p) { return s.cometric() * p; }

inline QVector dH(const HomogeneousStructure & s, const QVector & p)
{
  const auto & d = s.distribution().basis();
  QVector q(d.size());
  for (std::size_t a = 0; a < d.size(); ++a) { q[a] = dot(d[a], p); }
  const QVector u = s.metric_inverse() * q;
  QVector x = zero_qvector(s.dim());
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t i = 0; i < s.dim(); ++i) { x[i] += u[a] * d[a][i]; }
  }
  return x;
}

/// ṗ = p([dH(p), ·]).
inline Eigen::VectorXd vertical_field(const HomogeneousStructure & s, const Eigen::VectorXd & p)
{
  return s.algebra().coad_apply(dH(s, p), p);
}

inline QVector vertical_field(const HomogeneousStructure & s, const QVector & p) { return s.algebra().coad_apply(dH(s, p), p); }

/// Derivative of vertical_field at p; column j is the response to a unit change of p_j.
inline Eigen::MatrixXd vertical_jacobian(const HomogeneousStructure & s, const Eigen::VectorXd & p)
{
  const auto n       = static_cast<Eigen::Index>(s.dim());
  const auto & g     = s.algebra();
  const Eigen::VectorXd x = dH(s, p);
  Eigen::MatrixXd j(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, c);
    j.col(c) = g.coad_apply(s.cometric().col(c), p) + g.coad_apply(x, e);
  }
  return j;
}

/// H as an exact quadratic polynomial in the covector coordinates p1..pn.
inline QPolynomial hamiltonian_polynomial(const HomogeneousStructure & s)
{
  const QMatrix d = s.distribution().basis_matrix();
  const QMatrix c = d * s.metric_inverse() * d.transpose();
  const std::size_t n = s.dim();
  QPolynomial h(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(c(i, j)) == 0) { continue; }
      Exponents e(n, 0);
      ++e[i];
      ++e[j];
      h.add_term(e, Rational(c(i, j) / 2));
    }
  }
  return h;
}

/// {F, G}(p) = Σ c[i][j][k] p_k ∂_iF ∂_jG.
inline QPolynomial lie_poisson_bracket(const LieAlgebra & g, const QPolynomial & f, const QPolynomial & h)
{
  const std::size_t n = g.dim();
  if (f.nvars() != n || h.nvars() != n) { throw DimensionError("Lie-Poisson bracket: polynomial variable count differs from the algebra"); }
  std::vector<QPolynomial> df, dh;
  for (std::size_t i = 0; i < n; ++i) {
    df.push_back(f.derivative(i));
    dh.push_back(h.derivative(i));
  }
  QPolynomial r(n);
  for (const auto & t : g.constants()) {
    if (df[t.i].is_zero() || dh[t.j].is_zero()) { continue; }
    r += QPolynomial::variable(n, t.k, t.value) * df[t.i] * dh[t.j];
  }
  return r;
}

/// True iff {p_i, F} vanishes for every coordinate function.
inline bool casimir_check(const QPolynomial & f, const LieAlgebra & g)
{
  const std::size_t n = g.dim();
  if (f.nvars() != n) { throw DimensionError("Casimir check: polynomial variable count differs from the algebra"); }
  for (std::size_t i = 0; i < n; ++i) {
    if (!lie_poisson_bracket(g, QPolynomial::variable(n, i), f).is_zero()) { return false; }
  }
  return true;
}

}  // namespace hsr
