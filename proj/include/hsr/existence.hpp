#pragma once

/**
 * @file
 * @brief Construction of one homogeneous geodesic: solvable case, quotients by ideals, and the Killing-form eigenvector.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hsr/errors.hpp"
#include "hsr/exact.hpp"
#include "hsr/hamiltonian.hpp"
#include "hsr/homogeneity.hpp"
#include "hsr/lie_algebra.hpp"
#include "hsr/structure.hpp"
#include "hsr/subspace.hpp"

namespace hsr {

class ExistenceError : public Error
{
public:
  using Error::Error;
};

struct Factorization
{
  HomogeneousStructure quotient;
  Subspace ideal;
  /// Columns: complement vectors whose images form the quotient basis.
  std::vector<QVector> complement;
  /// Quotient map in complement coordinates, (n - dim ideal) × n.
  QMatrix projection;

  /// Pullback of a quotient covector; it annihilates the ideal.
  QVector lift(const QVector & p) const { return projection.transpose() * p; }
  Eigen::VectorXd lift(const Eigen::VectorXd & p) const { return projection.transpose().to_eigen() * p; }
};

namespace detail {

inline std::vector<QVector> image(const QMatrix & pi, const std::vector<QVector> & vs)
{
  std::vector<QVector> out;
  for (const auto & v : vs) { out.push_back(pi * v); }
  return out;
}

/// Vectors of u that are form-orthogonal to w; form(a, b) takes ambient vectors.
template<class Form>
Subspace orthogonal_in(const Subspace & u, const Subspace & w, Form form)
{
  if (w.is_zero()) { return u; }
  QMatrix m(w.dim(), u.dim());
  for (std::size_t i = 0; i < w.dim(); ++i) {
    for (std::size_t j = 0; j < u.dim(); ++j) { m(i, j) = form(w.basis()[i], u.basis()[j]); }
  }
  std::vector<QVector> out;
  for (const auto & c : nullspace(m)) {
    QVector v = zero_qvector(u.ambient_dim());
    for (std::size_t j = 0; j < u.dim(); ++j) {
      for (std::size_t a = 0; a < v.size(); ++a) { v[a] += c[j] * u.basis()[j][a]; }
    }
    out.push_back(v);
  }
  return Subspace::span(out, u.ambient_dim());
}

inline Rational bilinear(const QMatrix & m, const QVector & a, const QVector & b) { return dot(a, m * b); }

/// B on two vectors of the distribution.
inline Rational metric_on(const HomogeneousStructure & s, const QVector & a, const QVector & b)
{
  const auto ca = s.distribution().coordinates(a);
  const auto cb = s.distribution().coordinates(b);
  if (!ca || !cb) { throw StructureError("vector is not in the distribution"); }
  return dot(*ca, s.metric() * *cb);
}

/// Extends `base` by vectors of `pool` to a basis of base + span(pool).
inline std::vector<QVector> extend_basis(const std::vector<QVector> & base, const std::vector<QVector> & pool, std::size_t n)
{
  std::vector<QVector> cur = base;
  std::vector<QVector> extra;
  for (const auto & v : pool) {
    auto trial = cur;
    trial.push_back(v);
    if (hsr::rank(QMatrix::from_columns(trial, n)) == trial.size()) {
      cur = std::move(trial);
      extra.push_back(v);
    }
  }
  return extra;
}

inline bool reductive(const LieAlgebra & g, const Subspace & k, const Subspace & m)
{
  return m.contains(bracket_span(g, k, m));
}

}  // namespace detail

/**
 * @brief Quotient of the structure by an ideal not containing the distribution.
 *
 * The quotient basis is the image of a coordinate complement of the ideal. The
 * new distribution is the image of the B-orthogonal complement of Δ ∩ ideal in
 * Δ with the metric carried over; the new isotropy is the image of k. Grading
 * layers are projected when they stay consistent; representations are dropped.
 */
inline Factorization factorize_by_ideal(const HomogeneousStructure & s, const Subspace & ideal)
{
  const auto & g      = s.algebra();
  const std::size_t n = s.dim();
  if (ideal.ambient_dim() != n) { throw DimensionError("ideal has wrong ambient dimension"); }
  if (!is_ideal(g, ideal)) { throw HypothesisError("subspace is not an ideal"); }
  if (ideal.contains(s.distribution())) { throw HypothesisError("ideal contains the distribution"); }

  const std::vector<QVector> comp = ideal.coordinate_complement();
  const std::size_t q             = comp.size();
  std::vector<QVector> frame      = comp;
  frame.insert(frame.end(), ideal.basis().begin(), ideal.basis().end());
  const QMatrix finv = inverse(QMatrix::from_columns(frame, n));
  QMatrix pi(q, n);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < n; ++j) { pi(i, j) = finv(i, j); }
  }

  std::vector<std::tuple<std::size_t, std::size_t, QVector>> brackets;
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = a + 1; b < q; ++b) {
      const QVector v = pi * g.bracket(comp[a], comp[b]);
      if (!is_zero(v)) { brackets.emplace_back(a, b, v); }
    }
  }
  std::vector<std::string> labels;
  for (const auto & c : comp) {
    std::size_t idx = 0;
    while (sgn(c[idx]) == 0) { ++idx; }
    labels.push_back(idx < g.labels().size() ? g.labels()[idx] : "e" + std::to_string(idx + 1));
  }
  LieAlgebra qg = LieAlgebra::from_brackets(q, brackets, labels);

  // distribution and metric
  const Subspace in_delta = s.distribution().intersect(ideal);
  const Subspace kept =
    detail::orthogonal_in(s.distribution(), in_delta, [&](const QVector & a, const QVector & b) { return detail::metric_on(s, a, b); });
  const auto & kb = kept.basis();
  QMatrix metric(kb.size(), kb.size());
  for (std::size_t i = 0; i < kb.size(); ++i) {
    for (std::size_t j = 0; j < kb.size(); ++j) { metric(i, j) = detail::metric_on(s, kb[i], kb[j]); }
  }
  const Subspace qdelta = Subspace::from_basis(detail::image(pi, kb), q);

  const Subspace qk = Subspace::span(detail::image(pi, s.isotropy().basis()), q);
  const Subspace pm = Subspace::span(detail::image(pi, s.complement().basis()), q);
  const Subspace common = qk.intersect(pm);
  const QMatrix killing = killing_form(qg);

  auto acceptable = [&](const Subspace & m) {
    return m.dim() + qk.dim() == q && (m + qk).dim() == q && m.contains(qdelta) && detail::reductive(qg, qk, m);
  };
  std::optional<Subspace> qm;
  {
    const Subspace c1 = detail::orthogonal_in(pm, common, [&](const QVector & a, const QVector & b) { return detail::bilinear(killing, a, b); });
    if (acceptable(c1)) { qm = c1; }
  }
  if (!qm) {
    const Subspace c2 = detail::orthogonal_in(pm, common, [](const QVector & a, const QVector & b) { return dot(a, b); });
    if (acceptable(c2)) { qm = c2; }
  }
  if (!qm) { throw StructureError("quotient has no reductive complement containing the distribution"); }

  std::vector<Subspace> grading;
  for (const auto & layer : s.grading()) {
    const Subspace l = Subspace::span(detail::image(pi, layer.basis()), q);
    if (!l.is_zero()) { grading.push_back(l); }
  }
  if (!grading.empty() && !(grading.front() == qdelta)) { grading.clear(); }

  HomogeneousStructure quotient(qg, qk, *qm, qdelta, metric, grading);
  return {std::move(quotient), ideal, comp, pi};
}

enum class ExistenceRoute { solvable_case, factorized, eigenvector };

inline const char * to_string(ExistenceRoute r)
{
  switch (r) {
    case ExistenceRoute::solvable_case: return "solvable_case";
    case ExistenceRoute::factorized: return "factorized";
    case ExistenceRoute::eigenvector: return "eigenvector";
  }
  return "?";
}

struct EigenConstruction
{
  /// Γ: B-orthogonal complement of Δ ∩ Δ^⊥K in Δ.
  Subspace gamma;
  QMatrix extended_metric;
  QMatrix killing;
  /// A = K⁻¹ B̂.
  QMatrix operator_a;
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  /// p̂ = B̂ X in the structure where the construction ran.
  Eigen::VectorXd momentum;
};

struct ExistenceAudit
{
  /// Killing kernels factored out, each in the algebra of its own stage.
  std::vector<Subspace> factored_ideals;
  /// Killing kernel of the final stage.
  Subspace final_kernel;
  /// Structure on which the solvable or eigenvector step ran.
  std::optional<HomogeneousStructure> reduced;
  /// Pullback of covectors from the reduced structure, n × dim(reduced).
  QMatrix pullback;
  bool solvable_step = false;
  std::optional<EigenConstruction> eigen;
};

struct ExistenceResult
{
  ExistenceRoute route = ExistenceRoute::eigenvector;
  Eigen::VectorXd momentum;
  Eigen::VectorXd geodesic_vector;
  HomogeneityCertificate certificate;
  ExistenceAudit audit;
};

namespace detail {

/// Nonzero p with p([m, m]) = 0 and p(k) = 0, preferring one that is nonzero on Δ.
inline QVector solvable_momentum(const HomogeneousStructure & s)
{
  const auto & g     = s.algebra();
  const Subspace rr  = bracket_span(g, s.complement(), s.complement());
  std::vector<QVector> rows = rr.basis();
  rows.insert(rows.end(), s.isotropy().basis().begin(), s.isotropy().basis().end());
  const auto cands = rows.empty() ? Subspace::whole(s.dim()).basis() : nullspace(QMatrix::from_rows(rows, s.dim()));
  if (cands.empty()) { throw ExistenceError("no nonzero covector annihilates [m, m] and k"); }
  for (const auto & p : cands) {
    for (const auto & d : s.distribution().basis()) {
      if (sgn(dot(p, d)) != 0) { return p; }
    }
  }
  return cands.front();
}

inline bool lex_greater(const Eigen::VectorXd & a, const Eigen::VectorXd & b)
{
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-12) { return a[i] > b[i]; }
  }
  return false;
}

inline EigenConstruction eigen_construction(const HomogeneousStructure & s)
{
  const auto & g       = s.algebra();
  const std::size_t n  = s.dim();
  const QMatrix killing = killing_form(g);
  auto kform = [&](const QVector & a, const QVector & b) { return bilinear(killing, a, b); };

  const Subspace whole = Subspace::whole(n);
  const Subspace delta_perp = orthogonal_in(whole, s.distribution(), kform);
  const Subspace d0         = s.distribution().intersect(delta_perp);
  const Subspace gamma      = orthogonal_in(s.distribution(), d0, [&](const QVector & a, const QVector & b) { return metric_on(s, a, b); });
  if (gamma.is_zero()) { throw HypothesisError("Killing form vanishes on the distribution"); }
  const Subspace gamma_perp = orthogonal_in(whole, gamma, kform);
  if (!gamma.intersect(gamma_perp).is_zero() || gamma.dim() + gamma_perp.dim() != n) {
    throw StructureError("distribution block and its Killing complement do not split the algebra");
  }

  // B̂: B on Γ ⊕ D0, identity on a fixed completion W of D0 in Γ^⊥K, Γ ⊥ Γ^⊥K
  const auto w = extend_basis(d0.basis(), gamma_perp.basis(), n);
  std::vector<QVector> frame = gamma.basis();
  frame.insert(frame.end(), d0.basis().begin(), d0.basis().end());
  frame.insert(frame.end(), w.begin(), w.end());
  QMatrix gram(n, n);
  const std::size_t dg = gamma.dim(), dd = d0.dim();
  for (std::size_t i = 0; i < dg; ++i) {
    for (std::size_t j = 0; j < dg; ++j) { gram(i, j) = metric_on(s, gamma.basis()[i], gamma.basis()[j]); }
  }
  for (std::size_t i = 0; i < dd; ++i) {
    for (std::size_t j = 0; j < dd; ++j) { gram(dg + i, dg + j) = metric_on(s, d0.basis()[i], d0.basis()[j]); }
  }
  for (std::size_t i = dg + dd; i < n; ++i) { gram(i, i) = 1; }
  const QMatrix tinv = inverse(QMatrix::from_columns(frame, n));
  const QMatrix bhat = tinv.transpose() * gram * tinv;
  const QMatrix a    = inverse(killing) * bhat;
  for (const auto & v : gamma.basis()) {
    if (!gamma.contains(a * v)) { throw StructureError("Γ is not invariant under K⁻¹B̂"); }
  }

  // A|Γ: K_Γ v = μ B_Γ v with λ = 1/μ
  Eigen::MatrixXd kg(dg, dg), bg(dg, dg), gb(n, dg);
  for (std::size_t i = 0; i < dg; ++i) {
    gb.col(static_cast<Eigen::Index>(i)) = to_eigen(gamma.basis()[i]);
    for (std::size_t j = 0; j < dg; ++j) {
      kg(i, j) = to_double(kform(gamma.basis()[i], gamma.basis()[j]));
      bg(i, j) = to_double(bilinear(bhat, gamma.basis()[i], gamma.basis()[j]));
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kg, bg);
  if (es.info() != Eigen::Success) { throw ExistenceError("eigen decomposition of K⁻¹B̂ on Γ failed"); }
  std::vector<double> lambdas;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double mu = es.eigenvalues()[i];
    lambdas.push_back(std::abs(mu) > 1e-300 ? 1.0 / mu : 0.0);
  }
  double best = 0.0;
  for (double l : lambdas) { best = std::max(best, std::abs(l)); }
  if (best <= 1e-10) { throw ExistenceError("no nonzero real eigenvalue of K⁻¹B̂ on Γ"); }

  const double tie = 1e-9 * std::max(1.0, best);
  std::optional<Eigen::VectorXd> chosen;
  double chosen_lambda = 0.0;
  for (int sign : {1, -1}) {
    const double target = sign * best;
    std::vector<Eigen::Index> cols;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (std::abs(lambdas[i] - target) <= tie) { cols.push_back(static_cast<Eigen::Index>(i)); }
    }
    if (cols.empty()) { continue; }
    Eigen::MatrixXd v(dg, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) { v.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]); }
    // eigenvectors are B_Γ-orthonormal, so V Vᵀ B_Γ projects onto the eigenspace
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(dg); ++i) {
      Eigen::VectorXd c = v * (v.transpose() * bg.col(i));
      const double nb  = std::sqrt(c.dot(bg * c));
      if (nb < 1e-10) { continue; }
      c /= nb;
      Eigen::VectorXd x = gb * c;
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (std::abs(x[k]) > 1e-12) {
          if (x[k] < 0) { x = -x; }
          break;
        }
      }
      if (!chosen || lex_greater(x, *chosen)) {
        chosen        = x;
        chosen_lambda = target;
      }
    }
  }
  if (!chosen) { throw ExistenceError("no eigenvector of K⁻¹B̂ found in Γ"); }

  EigenConstruction ec{gamma, bhat, killing, a, chosen_lambda, *chosen, bhat.to_eigen() * *chosen};
  if (s.isotropy_residual(ec.momentum) > 1e-9) { throw ExistenceError("eigenvector momentum does not annihilate the isotropy"); }
  return ec;
}

}  // namespace detail

/**
 * @brief Finds one homogeneous geodesic through the base point.
 *
 * Requires Ker K = m or K nonzero on Δ. Killing kernels are factored out until
 * either the kernel equals m (a covector killing [m, m] and k works) or the
 * Killing form is nondegenerate (an eigenvector of K⁻¹B̂ inside Δ works). The
 * result is lifted back and certified with check_homogeneous.
 */
inline ExistenceResult construct_homogeneous_geodesic(const HomogeneousStructure & s)
{
  {
    const Subspace r = killing_kernel(s.algebra());
    const QMatrix k  = killing_form(s.algebra());
    bool nonzero_on_delta = false;
    for (const auto & a : s.distribution().basis()) {
      for (const auto & b : s.distribution().basis()) { nonzero_on_delta = nonzero_on_delta || sgn(detail::bilinear(k, a, b)) != 0; }
    }
    if (!(r == s.complement()) && !nonzero_on_delta) {
      throw HypothesisError("Killing kernel differs from m and the Killing form vanishes on the distribution");
    }
  }

  ExistenceResult res;
  HomogeneousStructure cur = s;
  QMatrix pullback         = QMatrix::identity(s.dim());
  while (true) {
    const Subspace r = killing_kernel(cur.algebra());
    if (r == cur.complement()) {
      res.audit.solvable_step = true;
      res.audit.final_kernel  = r;
      const QVector p         = pullback * detail::solvable_momentum(cur);
      res.momentum            = to_eigen(p);
      break;
    }
    if (r.is_zero()) {
      res.audit.final_kernel = r;
      res.audit.eigen        = detail::eigen_construction(cur);
      res.momentum           = pullback.to_eigen() * res.audit.eigen->momentum;
      break;
    }
    if (r.contains(cur.distribution())) { throw HypothesisError("Killing kernel contains the distribution"); }
    const Factorization f = factorize_by_ideal(cur, r);
    res.audit.factored_ideals.push_back(r);
    pullback = pullback * f.projection.transpose();
    cur      = f.quotient;
  }
  res.audit.reduced  = cur;
  res.audit.pullback = pullback;
  if (!res.audit.factored_ideals.empty()) {
    res.route = ExistenceRoute::factorized;
  } else {
    res.route = res.audit.solvable_step ? ExistenceRoute::solvable_case : ExistenceRoute::eigenvector;
  }

  res.certificate = check_homogeneous(s, res.momentum);
  if (res.certificate.verdict != Verdict::homogeneous) { throw ExistenceError("constructed momentum failed the homogeneity check"); }
  res.geodesic_vector = *res.certificate.witness;
  return res;
}

struct EigenCheck
{
  bool ok = false;
  double bracket_residual = 0.0;
  double eigen_residual   = 0.0;
  double gamma_distance   = 0.0;
  double lifted_residual  = 0.0;
  /// |pullback·B̂X - momentum|, catches an eigenvector that no longer matches the result.
  double momentum_mismatch = 0.0;
  std::string message;
};

/**
 * @brief Independent re-check of an eigenvector result.
 *
 * Recomputes p̂([X, Y_j]) on the reduced structure, A·X - λX, the distance of X
 * from Γ, the bracket condition for the lifted momentum and geodesic vector,
 * and that B̂X pulls back to the stored momentum.
 */
inline EigenCheck verify_eigenconstruction(const HomogeneousStructure & s, const ExistenceResult & r)
{
  EigenCheck c;
  if (!r.audit.eigen || !r.audit.reduced) {
    c.message = "result carries no eigenvector construction";
    return c;
  }
  const auto & e   = *r.audit.eigen;
  const auto & red = *r.audit.reduced;
  const Eigen::VectorXd x    = e.eigenvector;
  const Eigen::VectorXd phat = e.extended_metric.to_eigen() * x;
  c.bracket_residual         = witness_residual(red, phat, x);
  c.eigen_residual           = (e.operator_a.to_eigen() * x - e.eigenvalue * x).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd gb   = e.gamma.basis_matrix().to_eigen();
  const Eigen::VectorXd coef = gb.completeOrthogonalDecomposition().solve(x);
  c.gamma_distance           = (gb * coef - x).norm();
  c.lifted_residual          = witness_residual(s, r.momentum, r.geodesic_vector);
  c.momentum_mismatch        = (r.audit.pullback.to_eigen() * phat - r.momentum).cwiseAbs().maxCoeff();
  c.ok = c.bracket_residual < 1e-9 && c.eigen_residual < 1e-10 && c.gamma_distance < 1e-10 && c.lifted_residual < 1e-9 &&
         c.momentum_mismatch < 1e-10;
  if (!c.ok) { c.message = "eigenvector construction does not re-verify"; }
  return c;
}

}  // namespace hsr
