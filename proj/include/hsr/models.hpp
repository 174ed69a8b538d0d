#pragma once

/**
 * @file
 * @brief Registry of bundled homogeneous sub-Riemannian models.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hsr/hamiltonian.hpp"
#include "hsr/lie_algebra.hpp"
#include "hsr/polynomial.hpp"
#include "hsr/structure.hpp"

namespace hsr {

class ModelError : public Error
{
public:
  using Error::Error;
};

/// A machine-checkable claim about a model, e.g. {"go_status", "GO_refuted_with_witness"}.
struct ModelFact
{
  std::string key;
  std::string value;
};

struct ModelSpec
{
  std::string name;
  HomogeneousStructure structure;
  /// Casimirs as polynomials in the covector coordinates p1..pn of g.
  std::vector<QPolynomial> casimirs;
  std::vector<std::string> casimir_names;
  std::vector<ModelFact> facts;
  /// Rotation rate of the axisymmetric closed form, with its axis as a vector of g.
  std::optional<double> kappa;
  std::optional<QVector> axis;
  bool isotropy_connected = true;
  std::string notes;

  std::optional<std::string> fact(const std::string & key) const
  {
    for (const auto & f : facts) {
      if (f.key == key) { return f.value; }
    }
    return std::nullopt;
  }
};

namespace detail {

inline Subspace coordinate_span(const std::vector<std::size_t> & idx, std::size_t n)
{
  std::vector<QVector> b;
  for (auto i : idx) { b.push_back(unit_qvector(n, i)); }
  return b.empty() ? Subspace(n) : Subspace::from_basis(b, n);
}

inline std::vector<std::size_t> range(std::size_t from, std::size_t to)
{
  std::vector<std::size_t> r;
  for (std::size_t i = from; i < to; ++i) { r.push_back(i); }
  return r;
}

inline QMatrix diagonal(const std::vector<Rational> & d)
{
  QMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) { m(i, i) = d[i]; }
  return m;
}

inline void add_casimirs(ModelSpec & spec, const std::vector<std::string> & texts)
{
  for (const auto & t : texts) {
    spec.casimirs.push_back(parse_polynomial(t, spec.structure.dim()));
    spec.casimir_names.push_back("C" + std::to_string(spec.casimirs.size()));
  }
}

/// so3 (cyclic) or sl2 (sign = -1 on [X1, X2]) on the first three of n coordinates.
inline std::vector<std::tuple<std::size_t, std::size_t, QVector>> rotation_brackets(std::size_t n, int sign)
{
  auto e = [n](std::size_t i, int s) {
    QVector v = zero_qvector(n);
    v[i] = s;
    return v;
  };
  return {{0, 1, e(2, sign)}, {1, 2, e(0, 1)}, {2, 0, e(1, 1)}};
}

/// so3 or sl2 plus a central J; isotropy spanned by X3 - J.
inline ModelSpec axisymmetric(const std::string & name, int sign, const Rational & i1)
{
  const std::size_t n = 4;
  LieAlgebra g = LieAlgebra::from_brackets(n, rotation_brackets(n, sign), {"X1", "X2", "X3", "J"});
  QVector kvec{0, 0, 1, -1};
  HomogeneousStructure s(g, Subspace::from_basis({kvec}, n), coordinate_span({0, 1, 2}, n), coordinate_span({0, 1}, n), diagonal({i1, i1}));
  ModelSpec spec{name, s};
  add_casimirs(spec, {sign > 0 ? "p1^2 + p2^2 + p3^2" : "p1^2 + p2^2 - p3^2"});
  spec.kappa = sign * to_double(Rational(1) / i1);
  spec.axis  = unit_qvector(n, 2);
  spec.facts = {{"go_status", "GO_affirmed_up_to_degree"}, {"closed_form", "axisymmetric"}};
  return spec;
}

}  // namespace detail

/// Free nilpotent algebra of step 2 on V = R^rank with the rotation algebra so(V) as isotropy.
inline ModelSpec generate_free_step2(int rank)
{
  if (rank < 2 || rank > 8) { throw ModelError("free step-2 rank must lie in [2, 8]"); }
  const auto r   = static_cast<std::size_t>(rank);
  const auto np  = r * (r - 1) / 2;
  const auto n   = r + 2 * np;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b) { pairs.emplace_back(a, b); }
  }
  auto pair_index = [&](std::size_t a, std::size_t b) {
    return static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) - pairs.begin());
  };
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < r; ++a) { labels.push_back("e" + std::to_string(a + 1)); }
  for (auto [a, b] : pairs) { labels.push_back("w" + std::to_string(a + 1) + std::to_string(b + 1)); }
  for (auto [a, b] : pairs) { labels.push_back("E" + std::to_string(a + 1) + std::to_string(b + 1)); }

  // wedge e_a ∧ e_b as a coordinate vector of g
  auto wedge = [&](std::size_t a, std::size_t b) {
    QVector v = zero_qvector(n);
    if (a < b) { v[r + pair_index(a, b)] = 1; }
    if (a > b) { v[r + pair_index(b, a)] = -1; }
    return v;
  };
  // E_ab = e_a e_bᵀ - e_b e_aᵀ on V
  auto rot_apply = [&](std::size_t a, std::size_t b, std::size_t c) {
    std::vector<std::pair<std::size_t, int>> out;
    if (c == b) { out.emplace_back(a, 1); }
    if (c == a) { out.emplace_back(b, -1); }
    return out;
  };

  std::vector<LieAlgebra::Constant> cs;
  auto add = [&](std::size_t i, std::size_t j, const QVector & v) {
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(v[k]) != 0) {
        cs.push_back({i, j, k, v[k]});
        cs.push_back({j, i, k, -v[k]});
      }
    }
  };
  for (auto [a, b] : pairs) { add(a, b, wedge(a, b)); }
  for (std::size_t p = 0; p < np; ++p) {
    const auto [a, b] = pairs[p];
    const std::size_t ep = r + np + p;
    for (std::size_t c = 0; c < r; ++c) {
      QVector v = zero_qvector(n);
      for (auto [t, s] : rot_apply(a, b, c)) { v[t] += s; }
      add(ep, c, v);
    }
    for (std::size_t q = 0; q < np; ++q) {
      const auto [c, d] = pairs[q];
      QVector v = zero_qvector(n);
      for (auto [t, s] : rot_apply(a, b, c)) {
        const QVector w = wedge(t, d);
        for (std::size_t k = 0; k < n; ++k) { v[k] += s * w[k]; }
      }
      for (auto [t, s] : rot_apply(a, b, d)) {
        const QVector w = wedge(c, t);
        for (std::size_t k = 0; k < n; ++k) { v[k] += s * w[k]; }
      }
      add(ep, r + q, v);
    }
    for (std::size_t q = p + 1; q < np; ++q) {
      // commutator of rotation matrices, read off in the E basis
      const auto [c, d] = pairs[q];
      std::vector<std::vector<int>> m1(r, std::vector<int>(r, 0)), m2 = m1;
      m1[a][b] = 1;
      m1[b][a] = -1;
      m2[c][d] = 1;
      m2[d][c] = -1;
      QVector v = zero_qvector(n);
      for (std::size_t x = 0; x < r; ++x) {
        for (std::size_t y = x + 1; y < r; ++y) {
          int s = 0;
          for (std::size_t z = 0; z < r; ++z) { s += m1[x][z] * m2[z][y] - m2[x][z] * m1[z][y]; }
          if (s != 0) { v[r + np + pair_index(x, y)] = s; }
        }
      }
      add(ep, r + np + q, v);
    }
  }
  LieAlgebra g(n, cs, labels);

  std::vector<QMatrix> rep;
  if (rank == 2) {
    // 4x4 upper triangular: x ↦ [[0, vᵀ, c], [0, M, ½E₁₂v], [0, 0, 0]]
    rep.assign(n, QMatrix(4, 4));
    rep[0](0, 1) = 1;
    rep[0](2, 3) = Rational(-1, 2);
    rep[1](0, 2) = 1;
    rep[1](1, 3) = Rational(1, 2);
    rep[2](0, 3) = 1;
    rep[3](1, 2) = 1;
    rep[3](2, 1) = -1;
  }
  HomogeneousStructure s(g, detail::coordinate_span(detail::range(r + np, n), n), detail::coordinate_span(detail::range(0, r + np), n),
    detail::coordinate_span(detail::range(0, r), n), QMatrix::identity(r),
    {detail::coordinate_span(detail::range(0, r), n), detail::coordinate_span(detail::range(r, r + np), n)}, rep);
  ModelSpec spec{"free_step2_rank" + std::to_string(rank), s};
  std::vector<std::string> cas;
  for (std::size_t p = 0; p < np; ++p) { cas.push_back("p" + std::to_string(r + p + 1)); }
  detail::add_casimirs(spec, cas);
  spec.facts = {{"go_status", "GO_affirmed_up_to_degree"}, {"existence_route", "solvable_case"}};
  return spec;
}

inline ModelSpec make_heisenberg()
{
  const std::size_t n = 4;
  LieAlgebra g = LieAlgebra::from_brackets(n, {{0, 1, {0, 0, 1, 0}}, {3, 0, {0, 1, 0, 0}}, {3, 1, {-1, 0, 0, 0}}}, {"e1", "e2", "e3", "J"});
  std::vector<QMatrix> rep(n, QMatrix(4, 4));
  rep[0](0, 1) = 1;
  rep[0](2, 3) = Rational(-1, 2);
  rep[1](0, 2) = 1;
  rep[1](1, 3) = Rational(1, 2);
  rep[2](0, 3) = 1;
  rep[3](1, 2) = -1;
  rep[3](2, 1) = 1;
  HomogeneousStructure s(g, detail::coordinate_span({3}, n), detail::coordinate_span({0, 1, 2}, n), detail::coordinate_span({0, 1}, n),
    QMatrix::identity(2), {detail::coordinate_span({0, 1}, n), detail::coordinate_span({2}, n)}, rep);
  ModelSpec spec{"heisenberg", s};
  detail::add_casimirs(spec, {"p3"});
  spec.facts = {{"go_status", "GO_affirmed_up_to_degree"}, {"existence_route", "solvable_case"}, {"fixed_points", "p3=0"}};
  spec.notes = "J acts by [J,e1]=e2, [J,e2]=-e1";
  return spec;
}

inline ModelSpec make_cartan()
{
  const std::size_t n = 6;
  LieAlgebra g = LieAlgebra::from_brackets(n,
    {{0, 1, {0, 0, 1, 0, 0, 0}}, {0, 2, {0, 0, 0, 1, 0, 0}}, {1, 2, {0, 0, 0, 0, 1, 0}}, {5, 0, {0, 1, 0, 0, 0, 0}},
      {5, 1, {-1, 0, 0, 0, 0, 0}}, {5, 3, {0, 0, 0, 0, 1, 0}}, {5, 4, {0, 0, 0, -1, 0, 0}}},
    {"X1", "X2", "X3", "X4", "X5", "J"});
  HomogeneousStructure s(g, detail::coordinate_span({5}, n), detail::coordinate_span({0, 1, 2, 3, 4}, n), detail::coordinate_span({0, 1}, n),
    QMatrix::identity(2),
    {detail::coordinate_span({0, 1}, n), detail::coordinate_span({2}, n), detail::coordinate_span({3, 4}, n)});
  ModelSpec spec{"cartan", s};
  detail::add_casimirs(spec, {"1/2*p3^2 + p1*p5 - p2*p4", "p4", "p5"});
  spec.facts = {{"go_status", "GO_refuted_with_witness"}, {"existence_route", "solvable_case"}};
  spec.notes = "J rotates (X1,X2) and (X4,X5) by [J,X1]=X2, [J,X4]=X5 and fixes X3";
  return spec;
}

inline ModelSpec make_so3_generic()
{
  const std::size_t n = 3;
  LieAlgebra g = LieAlgebra::from_brackets(n, detail::rotation_brackets(n, 1), {"X1", "X2", "X3"});
  std::vector<QMatrix> ad;
  for (std::size_t i = 0; i < n; ++i) { ad.push_back(g.ad_matrix(unit_qvector(n, i))); }
  HomogeneousStructure s(g, Subspace(n), Subspace::whole(n), Subspace::whole(n), detail::diagonal({1, 2, 3}), {}, ad);
  ModelSpec spec{"so3_generic", s};
  detail::add_casimirs(spec, {"p1^2 + p2^2 + p3^2"});
  spec.isotropy_connected = false;
  spec.facts = {{"fixed_point_count", "6"}, {"go_status", "evidence_only"}};
  spec.notes = "isotropy is the finite group Z3; invariant tests use k = 0";
  return spec;
}

inline ModelSpec make_rolling_sphere()
{
  const std::size_t n = 5;
  LieAlgebra g = LieAlgebra::from_brackets(n, detail::rotation_brackets(n, 1), {"V1", "V2", "V3", "e1", "e2"});
  Subspace delta = Subspace::from_basis({{0, -1, 0, 1, 0}, {1, 0, 0, 0, 1}, {0, 0, 1, 0, 0}}, n);
  HomogeneousStructure s(g, Subspace(n), Subspace::whole(n), delta, QMatrix::identity(3));
  ModelSpec spec{"rolling_sphere", s};
  detail::add_casimirs(spec, {"p1^2 + p2^2 + p3^2", "p4", "p5"});
  spec.facts = {{"go_status", "evidence_only"}, {"existence_route", "factorized"}};
  spec.notes = "isotropy taken as k = 0; the exact isotropy group is not determined";
  return spec;
}

inline ModelSpec make_biinvariant_compact()
{
  const std::size_t n = 3;
  LieAlgebra g = LieAlgebra::from_brackets(n, detail::rotation_brackets(n, 1), {"X1", "X2", "X3"});
  HomogeneousStructure s(g, Subspace(n), Subspace::whole(n), Subspace::whole(n), detail::diagonal({2, 2, 2}));
  ModelSpec spec{"biinvariant_compact", s};
  detail::add_casimirs(spec, {"p1^2 + p2^2 + p3^2"});
  spec.facts = {{"vertical_field", "zero"}, {"go_status", "GO_affirmed_up_to_degree"}, {"existence_route", "eigenvector"}};
  spec.notes = "metric is minus the Killing form";
  return spec;
}

/// Commutative R^n with the Euclidean metric.
inline ModelSpec make_abelian(std::size_t n)
{
  HomogeneousStructure s(LieAlgebra(n, {}), Subspace(n), Subspace::whole(n), Subspace::whole(n), QMatrix::identity(n), {Subspace::whole(n)});
  ModelSpec spec{"abelian" + std::to_string(n), s};
  spec.facts = {{"go_status", "GO_affirmed_up_to_degree"}, {"existence_route", "solvable_case"}};
  return spec;
}

inline const std::vector<std::string> & model_names()
{
  static const std::vector<std::string> names{"heisenberg", "free_step2_rank2", "free_step2_rank3", "free_step2_rank4", "free_step2_rank5",
    "free_step2_rank6", "cartan", "so3_axisym", "so3_generic", "sl2_axisym", "so3_kp", "sl2_kp", "rolling_sphere", "biinvariant_compact"};
  return names;
}

inline ModelSpec load_model(const std::string & name)
{
  if (name == "heisenberg") { return make_heisenberg(); }
  if (name.rfind("free_step2_rank", 0) == 0) {
    const std::string tail = name.substr(15);
    if (tail.size() == 1 && tail[0] >= '2' && tail[0] <= '6') { return generate_free_step2(tail[0] - '0'); }
  }
  if (name == "cartan") { return make_cartan(); }
  if (name == "so3_axisym") { return detail::axisymmetric(name, 1, 2); }
  if (name == "sl2_axisym") { return detail::axisymmetric(name, -1, 2); }
  if (name == "so3_kp") {
    auto spec = detail::axisymmetric(name, 1, 1);
    spec.facts.push_back({"existence_route", "factorized"});
    return spec;
  }
  if (name == "sl2_kp") {
    auto spec = detail::axisymmetric(name, -1, 2);
    spec.facts.push_back({"existence_route", "factorized"});
    spec.notes = "metric is the Killing form restricted to the distribution";
    return spec;
  }
  if (name == "so3_generic") { return make_so3_generic(); }
  if (name == "rolling_sphere") { return make_rolling_sphere(); }
  if (name == "biinvariant_compact") { return make_biinvariant_compact(); }
  throw ModelError("unknown model '" + name + "'");
}

/// A Casimir written on g, pulled back to m* coordinates through the lift p = L y.
inline QPolynomial to_m_coordinates(const HomogeneousStructure & s, const QPolynomial & f)
{
  std::vector<std::vector<Rational>> map(s.dim(), std::vector<Rational>(s.dim_m()));
  for (std::size_t i = 0; i < s.dim_m(); ++i) {
    const QVector col = s.lift(unit_qvector(s.dim_m(), i));
    for (std::size_t a = 0; a < s.dim(); ++a) { map[a][i] = col[a]; }
  }
  return f.substitute_linear(map, s.dim_m());
}

/// Casimirs are checked on m when m is a subalgebra, otherwise on g.
inline bool model_casimir_ok(const ModelSpec & spec, const QPolynomial & f)
{
  const auto & s = spec.structure;
  if (is_subalgebra(s.algebra(), s.complement())) { return casimir_check(to_m_coordinates(s, f), projected_m_algebra(s)); }
  return casimir_check(f, s.algebra());
}

}  // namespace hsr
