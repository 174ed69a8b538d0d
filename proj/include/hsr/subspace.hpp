#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hsr/exact.hpp"

namespace hsr {

/**
 * @brief Linear subspace of a coordinate space, kept exactly.
 *
 * The basis supplied by the caller is retained in its given order (metrics and
 * dual coordinates refer to it); a reduced echelon copy is used for equality
 * and membership tests.
 */
class Subspace
{
public:
  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

  /// Keeps the given ordered basis; throws StructureError if it is dependent.
  static Subspace from_basis(std::vector<QVector> basis, std::size_t ambient)
  {
    Subspace s(ambient);
    for (const auto & v : basis) {
      if (v.size() != ambient) { throw DimensionError("subspace vector has wrong length"); }
    }
    s.canonical_ = canonical_rows(basis, ambient);
    if (s.canonical_.size() != basis.size()) { throw StructureError("subspace basis vectors are linearly dependent"); }
    s.basis_ = std::move(basis);
    return s;
  }

  /// Span of arbitrary vectors; the basis becomes the reduced echelon rows.
  static Subspace span(const std::vector<QVector> & vectors, std::size_t ambient)
  {
    Subspace s(ambient);
    for (const auto & v : vectors) {
      if (v.size() != ambient) { throw DimensionError("subspace vector has wrong length"); }
    }
    s.canonical_ = canonical_rows(vectors, ambient);
    s.basis_     = s.canonical_;
    return s;
  }

  static Subspace whole(std::size_t n)
  {
    std::vector<QVector> b;
    for (std::size_t i = 0; i < n; ++i) { b.push_back(unit_qvector(n, i)); }
    return from_basis(std::move(b), n);
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }

  const std::vector<QVector> & basis() const { return basis_; }
  const std::vector<QVector> & canonical() const { return canonical_; }

  /// Columns are the basis vectors.
  QMatrix basis_matrix() const { return QMatrix::from_columns(basis_, ambient_); }

  bool contains(const QVector & v) const
  {
    if (v.size() != ambient_) { throw DimensionError("membership test: wrong length"); }
    if (is_hsr_zero(v)) { return true; }
    auto rows = canonical_;
    rows.push_back(v);
    return canonical_rows(rows, ambient_).size() == canonical_.size();
  }

  bool contains(const Subspace & other) const
  {
    for (const auto & v : other.canonical_) {
      if (!contains(v)) { return false; }
    }
    return true;
  }

  bool operator==(const Subspace & o) const { return ambient_ == o.ambient_ && canonical_ == o.canonical_; }

  Subspace operator+(const Subspace & o) const
  {
    auto all = canonical_;
    all.insert(all.end(), o.canonical_.begin(), o.canonical_.end());
    return span(all, ambient_);
  }

  Subspace intersect(const Subspace & o) const
  {
    if (is_zero() || o.is_zero()) { return Subspace(ambient_); }
    // a·U - b·W = 0
    const std::size_t du = dim(), dw = o.dim();
    QMatrix m(ambient_, du + dw);
    for (std::size_t i = 0; i < ambient_; ++i) {
      for (std::size_t j = 0; j < du; ++j) { m(i, j) = basis_[j][i]; }
      for (std::size_t j = 0; j < dw; ++j) { m(i, du + j) = -o.basis_[j][i]; }
    }
    std::vector<QVector> vecs;
    for (const auto & c : nullspace(m)) {
      QVector v = zero_qvector(ambient_);
      for (std::size_t j = 0; j < du; ++j) {
        if (sgn(c[j]) == 0) { continue; }
        for (std::size_t i = 0; i < ambient_; ++i) { v[i] += c[j] * basis_[j][i]; }
      }
      vecs.push_back(std::move(v));
    }
    return span(vecs, ambient_);
  }

  /// Coordinates of v in the stored basis, if v lies in the subspace.
  std::optional<QVector> coordinates(const QVector & v) const
  {
    if (v.size() != ambient_) { throw DimensionError("coordinates: wrong length"); }
    if (is_zero()) { return is_hsr_zero(v) ? std::optional<QVector>(QVector{}) : std::nullopt; }
    return solve(basis_matrix(), v);
  }

  /// Vectors annihilated by every row of `forms`, as a subspace of the ambient space.
  static Subspace kernel_of(const std::vector<QVector> & forms, std::size_t ambient)
  {
    if (forms.empty()) { return whole(ambient); }
    return span(nullspace(QMatrix::from_rows(forms, ambient)), ambient);
  }

  /// Extends this subspace's basis by coordinate vectors to a basis of the ambient space.
  std::vector<QVector> coordinate_complement() const
  {
    std::vector<QVector> rows = canonical_;
    std::vector<QVector> extra;
    for (std::size_t i = 0; i < ambient_ && rows.size() < ambient_; ++i) {
      auto trial = rows;
      trial.push_back(unit_qvector(ambient_, i));
      if (canonical_rows(trial, ambient_).size() > rows.size()) {
        rows.push_back(unit_qvector(ambient_, i));
        extra.push_back(unit_qvector(ambient_, i));
      }
    }
    return extra;
  }

private:
  static bool is_hsr_zero(const QVector & v) { return hsr::is_zero(v); }

  static std::vector<QVector> canonical_rows(const std::vector<QVector> & vectors, std::size_t ambient)
  {
    if (vectors.empty()) { return {}; }
    const Echelon e = rref(QMatrix::from_rows(vectors, ambient));
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < e.rank(); ++i) { rows.push_back(e.reduced.row(i)); }
    return rows;
  }

  std::size_t ambient_;
  std::vector<QVector> basis_;
  std::vector<QVector> canonical_;
};

}  // namespace hsr
