#pragma once

/**
 * @file
 * @brief Left-invariant sub-Riemannian structures on homogeneous spaces G/K.
 */

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hsr/exact.hpp"
#include "hsr/lie_algebra.hpp"
#include "hsr/subspace.hpp"

namespace hsr {

/**
 * @brief The data (g, k, m, Δ, B) plus optional grading and matrix representation.
 *
 * Shape invariants (g = k ⊕ m, Δ ⊆ m, B symmetric positive definite) are
 * enforced on construction. Algebraic invariants such as Jacobi, reductivity
 * and bracket generation are reported by validate_structure() instead, so that
 * broken specifications can still be loaded and diagnosed.
 *
 * Momenta are covectors on g in the dual basis; the physically meaningful ones
 * annihilate k. Coordinates on m* are y_i = p(m_i) for the stored m basis.
 */
class HomogeneousStructure
{
public:
  HomogeneousStructure() = default;

  HomogeneousStructure(LieAlgebra g, Subspace k, Subspace m, Subspace delta, QMatrix metric, std::vector<Subspace> grading = {},
    std::vector<QMatrix> representation = {}, std::optional<Subspace> delta_complement = std::nullopt)
      : g_(std::move(g)),
        k_(std::move(k)),
        m_(std::move(m)),
        delta_(std::move(delta)),
        metric_(std::move(metric)),
        grading_(std::move(grading)),
        rep_(std::move(representation)),
        delta_complement_(std::move(delta_complement))
  {
    const std::size_t n = g_.dim();
    for (const Subspace * s : {&k_, &m_, &delta_}) {
      if (s->ambient_dim() != n) { throw DimensionError("subspace ambient dimension differs from the algebra"); }
    }
    if (k_.dim() + m_.dim() != n) { throw StructureError("dim k + dim m must equal dim g"); }
    std::vector<QVector> cols = m_.basis();
    cols.insert(cols.end(), k_.basis().begin(), k_.basis().end());
    frame_ = QMatrix::from_columns(cols, n);
    if (hsr::rank(frame_) != n) { throw StructureError("k and m do not span g as a direct sum"); }
    frame_inv_ = inverse(frame_);
    if (delta_.is_zero()) { throw StructureError("distribution is zero"); }
    if (!m_.contains(delta_)) { throw StructureError("distribution is not contained in m"); }
    const std::size_t r = delta_.dim();
    if (metric_.rows() != r || metric_.cols() != r) { throw DimensionError("metric size differs from dim of the distribution"); }
    if (!metric_.is_symmetric()) { throw StructureError("metric is not symmetric"); }
    if (!is_positive_definite(metric_)) { throw StructureError("metric is not positive definite"); }
    metric_inv_ = inverse(metric_);
    for (const auto & layer : grading_) {
      if (layer.ambient_dim() != n) { throw DimensionError("grading layer has wrong ambient dimension"); }
    }
    for (const auto & a : rep_) {
      if (a.rows() != a.cols() || (!rep_.empty() && a.rows() != rep_.front().rows())) {
        throw DimensionError("representation matrices must be square and equally sized");
      }
    }
    if (!rep_.empty() && rep_.size() != n) { throw DimensionError("representation needs one matrix per basis vector"); }
    if (delta_complement_ && delta_complement_->ambient_dim() != n) { throw DimensionError("distribution complement has wrong ambient dimension"); }
    build_caches();
  }

  const LieAlgebra & algebra() const { return g_; }
  const Subspace & isotropy() const { return k_; }
  const Subspace & complement() const { return m_; }
  const Subspace & distribution() const { return delta_; }
  const QMatrix & metric() const { return metric_; }
  const QMatrix & metric_inverse() const { return metric_inv_; }
  const std::vector<Subspace> & grading() const { return grading_; }
  const std::vector<QMatrix> & representation() const { return rep_; }
  const std::optional<Subspace> & delta_complement() const { return delta_complement_; }

  std::size_t dim() const { return g_.dim(); }
  std::size_t dim_m() const { return m_.dim(); }
  std::size_t dim_k() const { return k_.dim(); }
  std::size_t rank() const { return delta_.dim(); }

  /// Coordinates of v in the basis (m_1..m_d, k_1..k_e).
  QVector frame_coordinates(const QVector & v) const { return frame_inv_ * v; }

  QVector m_part(const QVector & v) const
  {
    QVector c = frame_coordinates(v);
    QVector r = zero_qvector(dim());
    for (std::size_t i = 0; i < dim_m(); ++i) {
      for (std::size_t a = 0; a < dim(); ++a) { r[a] += c[i] * m_.basis()[i][a]; }
    }
    return r;
  }

  QVector m_coordinates(const QVector & v) const
  {
    QVector c = frame_coordinates(v);
    c.resize(dim_m());
    return c;
  }

  /// Covector with p(m_i) = y_i and p(k) = 0.
  QVector lift(const QVector & y) const
  {
    if (y.size() != dim_m()) { throw DimensionError("m* coordinates have wrong length"); }
    QVector p = zero_qvector(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
      for (std::size_t i = 0; i < dim_m(); ++i) { p[a] += frame_inv_(i, a) * y[i]; }
    }
    return p;
  }

  Eigen::VectorXd lift(const Eigen::VectorXd & y) const
  {
    if (static_cast<std::size_t>(y.size()) != dim_m()) { throw DimensionError("m* coordinates have wrong length"); }
    return lift_ * y;
  }

  /// y_i = p(m_i).
  Eigen::VectorXd restrict_to_m(const Eigen::VectorXd & p) const { return m_basis_.transpose() * p; }

  QVector restrict_to_m(const QVector & p) const
  {
    QVector y = zero_qvector(dim_m());
    for (std::size_t i = 0; i < dim_m(); ++i) { y[i] = dot(m_.basis()[i], p); }
    return y;
  }

  /// Values of p on the distribution basis.
  Eigen::VectorXd delta_values(const Eigen::VectorXd & p) const { return delta_basis_.transpose() * p; }

  /// max_j |p(k_j)|.
  double isotropy_residual(const Eigen::VectorXd & p) const
  {
    if (dim_k() == 0) { return 0.0; }
    return (k_basis_.transpose() * p).cwiseAbs().maxCoeff();
  }

  /// Full covector from either m* coordinates (length dim m) or a covector on g (length dim g).
  Eigen::VectorXd momentum_from_input(const Eigen::VectorXd & v) const
  {
    const auto len = static_cast<std::size_t>(v.size());
    if (len == dim()) { return v; }
    if (len == dim_m()) { return lift(v); }
    std::ostringstream os;
    os << "momentum needs " << dim() << " covector entries";
    if (dim_m() != dim()) { os << " or " << dim_m() << " m* coordinates"; }
    throw DimensionError(os.str());
  }

  const Eigen::MatrixXd & delta_basis_matrix() const { return delta_basis_; }
  const Eigen::MatrixXd & k_basis_matrix() const { return k_basis_; }
  const Eigen::MatrixXd & m_basis_matrix() const { return m_basis_; }
  const Eigen::MatrixXd & lift_matrix() const { return lift_; }
  const Eigen::MatrixXd & metric_inverse_d() const { return metric_inv_d_; }
  /// Lower Cholesky factor L with B = L Lᵀ.
  const Eigen::MatrixXd & metric_sqrt() const { return metric_sqrt_; }
  /// D B⁻¹ Dᵀ, the cometric on g*.
  const Eigen::MatrixXd & cometric() const { return cometric_; }

private:
  void build_caches()
  {
    delta_basis_ = delta_.basis_matrix().to_eigen();
    k_basis_     = k_.is_zero() ? Eigen::MatrixXd(static_cast<Eigen::Index>(dim()), 0) : k_.basis_matrix().to_eigen();
    m_basis_     = m_.basis_matrix().to_eigen();
    const auto n = static_cast<Eigen::Index>(dim());
    const auto d = static_cast<Eigen::Index>(dim_m());
    lift_.resize(n, d);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index i = 0; i < d; ++i) {
        lift_(a, i) = to_double(frame_inv_(static_cast<std::size_t>(i), static_cast<std::size_t>(a)));
      }
    }
    metric_inv_d_ = metric_inv_.to_eigen();
    metric_sqrt_  = Eigen::LLT<Eigen::MatrixXd>(metric_.to_eigen()).matrixL();
    QMatrix dq    = delta_.basis_matrix();
    cometric_     = (dq * metric_inv_ * dq.transpose()).to_eigen();
  }

  LieAlgebra g_;
  Subspace k_, m_, delta_;
  QMatrix metric_, metric_inv_;
  std::vector<Subspace> grading_;
  std::vector<QMatrix> rep_;
  std::optional<Subspace> delta_complement_;

  QMatrix frame_, frame_inv_;
  Eigen::MatrixXd delta_basis_, k_basis_, m_basis_, lift_, metric_inv_d_, metric_sqrt_, cometric_;
};

/// Structure constants of m with the bracket [m_i, m_j] projected onto m along k.
inline LieAlgebra projected_m_algebra(const HomogeneousStructure & s)
{
  const auto & g  = s.algebra();
  const auto & mb = s.complement().basis();
  std::vector<LieAlgebra::Constant> cs;
  for (std::size_t i = 0; i < mb.size(); ++i) {
    for (std::size_t j = 0; j < mb.size(); ++j) {
      const QVector c = s.m_coordinates(g.bracket(mb[i], mb[j]));
      for (std::size_t l = 0; l < mb.size(); ++l) {
        if (sgn(c[l]) != 0) { cs.push_back({i, j, l, c[l]}); }
      }
    }
  }
  return LieAlgebra(mb.size(), cs);
}

struct StructureIssue
{
  std::string check;
  std::string message;
};

struct StructureReport
{
  ValidationReport algebra;
  std::vector<StructureIssue> issues;

  bool valid() const { return algebra.valid() && issues.empty(); }
};

/// Exact checks of every algebraic invariant of the structure.
inline StructureReport validate_structure(const HomogeneousStructure & s)
{
  StructureReport rep;
  const auto & g = s.algebra();
  rep.algebra    = validate(g);
  const std::size_t n = g.dim();

  if (!is_subalgebra(g, s.isotropy())) { rep.issues.push_back({"isotropy_subalgebra", "[k, k] is not contained in k"}); }
  if (!s.complement().contains(bracket_span(g, s.isotropy(), s.complement()))) {
    rep.issues.push_back({"reductive", "[k, m] is not contained in m"});
  }
  if (!(generated_subalgebra(g, s.distribution() + s.isotropy()) == Subspace::whole(n))) {
    rep.issues.push_back({"bracket_generating", "iterated brackets of the distribution and k do not span g"});
  }

  const auto & layers = s.grading();
  if (!layers.empty()) {
    Subspace sum(n);
    for (const auto & l : layers) { sum = sum + l; }
    std::size_t total = 0;
    for (const auto & l : layers) { total += l.dim(); }
    if (!(sum == s.complement()) || total != s.complement().dim()) {
      rep.issues.push_back({"grading", "grading layers do not decompose m"});
    }
    if (!(layers.front() == s.distribution())) { rep.issues.push_back({"grading", "first layer differs from the distribution"}); }
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const Subspace next = bracket_span(g, layers.front(), layers[i]);
      const Subspace want = i + 1 < layers.size() ? layers[i + 1] : Subspace(n);
      if (!(next == want)) {
        std::ostringstream os;
        os << "[g_1, g_" << i + 1 << "] differs from " << (i + 1 < layers.size() ? "g_" + std::to_string(i + 2) : std::string("0"));
        rep.issues.push_back({"grading", os.str()});
      }
    }
  }

  const auto & rho = s.representation();
  if (!rho.empty()) {
    for (std::size_t i = 0; i < n && rep.issues.size() < 50; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const QVector b = g.bracket(unit_qvector(n, i), unit_qvector(n, j));
        QMatrix lhs(rho.front().rows(), rho.front().cols());
        for (std::size_t k = 0; k < n; ++k) {
          if (sgn(b[k]) == 0) { continue; }
          for (std::size_t a = 0; a < lhs.rows(); ++a) {
            for (std::size_t c = 0; c < lhs.cols(); ++c) { lhs(a, c) += b[k] * rho[k](a, c); }
          }
        }
        if (!(lhs == rho[i] * rho[j] - rho[j] * rho[i])) {
          std::ostringstream os;
          os << "representation fails on the pair (" << i + 1 << "," << j + 1 << ")";
          rep.issues.push_back({"representation", os.str()});
        }
      }
    }
  }

  if (const auto & dc = s.delta_complement()) {
    if (!((*dc + s.distribution()) == s.complement()) || dc->dim() + s.rank() != s.dim_m()) {
      rep.issues.push_back({"delta_complement", "declared complement of the distribution does not complete it to m"});
    }
  }
  return rep;
}

}  // namespace hsr
