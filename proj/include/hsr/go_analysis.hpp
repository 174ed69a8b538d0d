#pragma once

/**
 * @file
 * @brief Geodesic-orbit analysis: isotropy-invariant polynomials, Poisson commutation with H, and the Carnot skew test.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "hsr/exact.hpp"
#include "hsr/hamiltonian.hpp"
#include "hsr/homogeneity.hpp"
#include "hsr/models.hpp"
#include "hsr/polynomial.hpp"
#include "hsr/structure.hpp"

namespace hsr {

struct InvariantBasis
{
  int degree_cap = 0;
  /// Polynomials in the m* coordinates y_i = p(m_i), grouped by increasing degree.
  std::vector<QPolynomial> polynomials;
};

namespace detail {

/// Sparse vector with keys sorted ascending.
using SparseVec = std::vector<std::pair<std::int64_t, Rational>>;

inline SparseVec axpy(const SparseVec & a, const Rational & c, const SparseVec & b)
{
  // a + c·b
  SparseVec r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.emplace_back(b[j].first, c * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second + c * b[j].second;
      if (sgn(v) != 0) { r.emplace_back(a[i].first, std::move(v)); }
      ++i;
      ++j;
    }
  }
  return r;
}

inline SparseVec from_map(const std::map<std::int64_t, Rational> & m)
{
  SparseVec r;
  for (const auto & [k, v] : m) {
    if (sgn(v) != 0) { r.emplace_back(k, v); }
  }
  return r;
}

/**
 * @brief Kernel of the linear map sending the j-th input vector to images[j].
 *
 * Incremental elimination on leading keys; each returned kernel element is a
 * sparse combination of input indices.
 */
inline std::vector<SparseVec> combination_kernel(const std::vector<SparseVec> & images)
{
  struct Row
  {
    SparseVec w, comb;
  };
  std::vector<Row> rows;
  std::unordered_map<std::int64_t, std::size_t> pivot;
  std::vector<SparseVec> kernel;
  for (std::size_t j = 0; j < images.size(); ++j) {
    SparseVec w    = images[j];
    SparseVec comb = {{static_cast<std::int64_t>(j), Rational(1)}};
    while (!w.empty()) {
      auto it = pivot.find(w.back().first);
      if (it == pivot.end()) { break; }
      const Row & r   = rows[it->second];
      const Rational f = -w.back().second / r.w.back().second;
      w                = axpy(w, f, r.w);
      comb             = axpy(comb, f, r.comb);
    }
    if (w.empty()) {
      kernel.push_back(std::move(comb));
    } else {
      pivot[w.back().first] = rows.size();
      rows.push_back({std::move(w), std::move(comb)});
    }
  }
  return kernel;
}

struct UnionFind
{
  std::vector<std::size_t> parent, size;
  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x)
  {
    while (parent[x] != x) { x = parent[x] = parent[parent[x]]; }
    return x;
  }
  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a == b) { return; }
    if (size[a] < size[b]) { std::swap(a, b); }
    parent[b] = a;
    size[a] += size[b];
  }
};

/// Nonzero entries (l, i, a) of the isotropy action [z, m_i] = Σ_l a m_l, one list per k-basis vector.
using ActionTerms = std::vector<std::vector<std::tuple<std::size_t, std::size_t, Rational>>>;

inline ActionTerms isotropy_action(const HomogeneousStructure & s)
{
  ActionTerms out;
  const auto & mb = s.complement().basis();
  for (const auto & z : s.isotropy().basis()) {
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> terms;
    for (std::size_t i = 0; i < mb.size(); ++i) {
      const QVector c = s.m_coordinates(s.algebra().bracket(z, mb[i]));
      for (std::size_t l = 0; l < mb.size(); ++l) {
        if (sgn(c[l]) != 0) { terms.emplace_back(l, i, c[l]); }
      }
    }
    out.push_back(std::move(terms));
  }
  return out;
}

/// All exponent vectors over `vars` (indices into nvars) of total degree d.
inline void monomials_of_degree(const std::vector<std::size_t> & vars, std::size_t pos, int d, Exponents & cur, std::vector<Exponents> & out)
{
  if (pos + 1 == vars.size()) {
    cur[vars[pos]] = static_cast<std::uint16_t>(d);
    out.push_back(cur);
    cur[vars[pos]] = 0;
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[vars[pos]] = static_cast<std::uint16_t>(k);
    monomials_of_degree(vars, pos + 1, d - k, cur, out);
  }
  cur[vars[pos]] = 0;
}

struct MonomialSpace
{
  std::vector<Exponents> monomials;
  std::map<Exponents, std::size_t, GradedLexDescending> index;
  /// images[z][m]: D_z applied to monomial m as (monomial index, coefficient).
  std::vector<std::vector<std::vector<std::pair<std::size_t, Rational>>>> images;
};

inline MonomialSpace build_space(const std::vector<std::vector<std::size_t>> & blocks, const std::vector<int> & degrees, std::size_t nvars,
  const ActionTerms & action)
{
  MonomialSpace sp;
  std::vector<Exponents> cur{Exponents(nvars, 0)};
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::vector<Exponents> part;
    Exponents tmp(nvars, 0);
    if (degrees[b] == 0) {
      part.push_back(tmp);
    } else {
      monomials_of_degree(blocks[b], 0, degrees[b], tmp, part);
    }
    std::vector<Exponents> next;
    for (const auto & a : cur) {
      for (const auto & q : part) {
        Exponents e = a;
        for (std::size_t i = 0; i < nvars; ++i) { e[i] = static_cast<std::uint16_t>(e[i] + q[i]); }
        next.push_back(std::move(e));
      }
    }
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end(), GradedLexDescending{});
  sp.monomials = std::move(cur);
  for (std::size_t i = 0; i < sp.monomials.size(); ++i) { sp.index.emplace(sp.monomials[i], i); }

  sp.images.resize(action.size());
  for (std::size_t z = 0; z < action.size(); ++z) {
    sp.images[z].resize(sp.monomials.size());
    for (std::size_t m = 0; m < sp.monomials.size(); ++m) {
      std::map<std::size_t, Rational> acc;
      const Exponents & e = sp.monomials[m];
      for (const auto & [l, i, a] : action[z]) {
        if (e[i] == 0) { continue; }
        Exponents t = e;
        --t[i];
        ++t[l];
        const auto it = sp.index.find(t);
        if (it == sp.index.end()) { throw StructureError("isotropy action does not preserve the coordinate blocks"); }
        acc[it->second] += a * e[i];
      }
      for (auto & [k, v] : acc) {
        if (sgn(v) != 0) { sp.images[z][m].emplace_back(k, std::move(v)); }
      }
    }
  }
  return sp;
}

/// Image of a sparse polynomial (over monomial indices) under the generators in `gens`, keyed by (generator, monomial).
inline SparseVec stacked_image(const MonomialSpace & sp, const std::vector<std::size_t> & gens, const SparseVec & poly)
{
  const auto nm = static_cast<std::int64_t>(sp.monomials.size());
  std::map<std::int64_t, Rational> acc;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    for (const auto & [m, c] : poly) {
      for (const auto & [t, a] : sp.images[gens[g]][static_cast<std::size_t>(m)]) { acc[static_cast<std::int64_t>(g) * nm + static_cast<std::int64_t>(t)] += c * a; }
    }
  }
  return from_map(acc);
}

/// Kernel of all generators on one monomial space, as sparse vectors over monomial indices.
inline std::vector<SparseVec> invariant_kernel(const MonomialSpace & sp, std::size_t ngens, std::size_t component_limit)
{
  const std::size_t nm = sp.monomials.size();
  // choose generators whose joint monomial graph keeps small components
  std::vector<std::size_t> first, rest;
  std::vector<bool> used(ngens, false);
  auto components_with = [&](const std::vector<std::size_t> & gens) {
    UnionFind uf(nm);
    for (auto g : gens) {
      for (std::size_t m = 0; m < nm; ++m) {
        for (const auto & [t, a] : sp.images[g][m]) { uf.unite(m, t); }
      }
    }
    return uf;
  };
  while (true) {
    std::size_t best = ngens, best_size = component_limit + 1;
    for (std::size_t g = 0; g < ngens; ++g) {
      if (used[g]) { continue; }
      auto trial = first;
      trial.push_back(g);
      auto uf           = components_with(trial);
      std::size_t worst = 0;
      for (std::size_t m = 0; m < nm; ++m) { worst = std::max(worst, uf.size[uf.find(m)]); }
      if (worst < best_size) {
        best_size = worst;
        best      = g;
      }
    }
    if (best == ngens) { break; }
    used[best] = true;
    first.push_back(best);
  }
  for (std::size_t g = 0; g < ngens; ++g) {
    if (!used[g]) { rest.push_back(g); }
  }

  std::vector<SparseVec> basis;
  {
    auto uf = components_with(first);
    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t m = 0; m < nm; ++m) { comps[uf.find(m)].push_back(m); }
    for (const auto & [root, members] : comps) {
      std::vector<SparseVec> imgs;
      for (auto m : members) { imgs.push_back(stacked_image(sp, first, {{static_cast<std::int64_t>(m), Rational(1)}})); }
      for (const auto & comb : combination_kernel(imgs)) {
        std::map<std::int64_t, Rational> poly;
        for (const auto & [j, c] : comb) { poly[static_cast<std::int64_t>(members[static_cast<std::size_t>(j)])] += c; }
        basis.push_back(from_map(poly));
      }
    }
  }
  if (rest.empty() || basis.empty()) { return basis; }

  std::vector<SparseVec> imgs;
  for (const auto & v : basis) { imgs.push_back(stacked_image(sp, rest, v)); }
  std::vector<SparseVec> out;
  for (const auto & comb : combination_kernel(imgs)) {
    SparseVec poly;
    for (const auto & [j, c] : comb) { poly = axpy(poly, c, basis[static_cast<std::size_t>(j)]); }
    out.push_back(std::move(poly));
  }
  return out;
}

/// Reduced echelon rows of sparse vectors over monomial indices (smaller index = leading monomial).
inline std::vector<SparseVec> canonical_rows(std::vector<SparseVec> rows)
{
  if (rows.empty()) { return rows; }
  std::vector<std::int64_t> cols;
  for (const auto & r : rows) {
    for (const auto & [k, v] : r) { cols.push_back(k); }
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  std::unordered_map<std::int64_t, std::size_t> pos;
  for (std::size_t i = 0; i < cols.size(); ++i) { pos[cols[i]] = i; }
  QMatrix m(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto & [k, v] : rows[i]) { m(i, pos[k]) = v; }
  }
  const Echelon e = rref(m);
  std::vector<SparseVec> out;
  for (std::size_t i = 0; i < e.rank(); ++i) {
    SparseVec r;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (sgn(e.reduced(i, j)) != 0) { r.emplace_back(cols[j], e.reduced(i, j)); }
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void compositions(int d, std::size_t parts, std::vector<int> & cur, std::vector<std::vector<int>> & out)
{
  if (cur.size() + 1 == parts) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur.push_back(k);
    compositions(d - k, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/**
 * @brief Basis of the polynomials on m* of degree 1..degree_cap annihilated by the isotropy action.
 *
 * F is invariant when Σ_i ∂_iF · y([z, m_i]) vanishes identically for every
 * k-basis vector z. Work is split by multidegree over the k-invariant coordinate
 * blocks of m; each degree's basis is returned in reduced echelon form.
 */
inline InvariantBasis invariant_polynomials(const HomogeneousStructure & s, int degree_cap, unsigned jobs = 1)
{
  if (degree_cap < 1) { throw HypothesisError("degree cap must be at least 1"); }
  const std::size_t nv = s.dim_m();
  const auto action    = detail::isotropy_action(s);

  detail::UnionFind uf(nv);
  for (const auto & terms : action) {
    for (const auto & [l, i, a] : terms) { uf.unite(l, i); }
  }
  std::map<std::size_t, std::vector<std::size_t>> bm;
  for (std::size_t i = 0; i < nv; ++i) { bm[uf.find(i)].push_back(i); }
  std::vector<std::vector<std::size_t>> blocks;
  for (auto & [r, v] : bm) { blocks.push_back(v); }
  std::sort(blocks.begin(), blocks.end());

  InvariantBasis out;
  out.degree_cap = degree_cap;
  for (int d = 1; d <= degree_cap; ++d) {
    std::vector<std::vector<int>> multi;
    std::vector<int> cur;
    detail::compositions(d, blocks.size(), cur, multi);
    std::vector<std::vector<QPolynomial>> found(multi.size());
    parallel_for(multi.size(), jobs, [&](std::size_t idx) {
      const auto sp  = detail::build_space(blocks, multi[idx], nv, action);
      const auto ker = detail::canonical_rows(detail::invariant_kernel(sp, action.size(), 64));
      for (const auto & v : ker) {
        QPolynomial f(nv);
        for (const auto & [m, c] : v) { f.add_term(sp.monomials[static_cast<std::size_t>(m)], c); }
        found[idx].push_back(std::move(f));
      }
    });
    for (auto & f : found) {
      for (auto & p : f) { out.polynomials.push_back(std::move(p)); }
    }
  }
  return out;
}

/// Σ_i ∂_iF · y([z, m_i]) for every k-basis vector z.
inline std::vector<QPolynomial> isotropy_derivatives(const HomogeneousStructure & s, const QPolynomial & f)
{
  const auto action = detail::isotropy_action(s);
  const std::size_t nv = s.dim_m();
  std::vector<QPolynomial> out;
  for (const auto & terms : action) {
    QPolynomial r(nv);
    for (const auto & [l, i, a] : terms) { r += QPolynomial::variable(nv, l, a) * f.derivative(i); }
    out.push_back(std::move(r));
  }
  return out;
}

/// H written in m* coordinates.
inline QPolynomial hamiltonian_on_m(const HomogeneousStructure & s) { return to_m_coordinates(s, hamiltonian_polynomial(s)); }

struct BracketFailure
{
  QPolynomial invariant;
  QPolynomial bracket;
};

struct BracketReport
{
  int degree_cap = 0;
  std::size_t invariants_checked = 0;
  std::vector<BracketFailure> failures;

  bool all_vanish() const { return failures.empty(); }
};

/// {H, F} on m* (bracket of m projected along k) for every invariant F up to the cap.
inline BracketReport go_test_bracket(const HomogeneousStructure & s, int degree_cap, unsigned jobs = 1)
{
  if (degree_cap < 2) { throw HypothesisError("bracket test needs a degree cap of at least 2"); }
  const auto basis   = invariant_polynomials(s, degree_cap, jobs);
  const LieAlgebra mg = projected_m_algebra(s);
  const QPolynomial h = hamiltonian_on_m(s);
  BracketReport rep;
  rep.degree_cap         = degree_cap;
  rep.invariants_checked = basis.polynomials.size();
  std::vector<QPolynomial> br(basis.polynomials.size());
  parallel_for(br.size(), jobs, [&](std::size_t i) { br[i] = lie_poisson_bracket(mg, h, basis.polynomials[i]); });
  for (std::size_t i = 0; i < br.size(); ++i) {
    if (!br[i].is_zero()) { rep.failures.push_back({basis.polynomials[i], br[i]}); }
  }
  return rep;
}

struct SkewEntry
{
  std::size_t delta_index;
  /// Frobenius norm of M + Mᵀ.
  double asymmetry;
  bool skew;
  bool nilpotent;
};

struct SkewReport
{
  std::string complement_source;
  std::size_t complement_dim = 0;
  std::vector<SkewEntry> entries;
  bool carnot = false;
  int step    = 0;

  bool skew_holds() const
  {
    return std::all_of(entries.begin(), entries.end(), [](const SkewEntry & e) { return e.skew; });
  }
  double max_asymmetry() const
  {
    double m = 0.0;
    for (const auto & e : entries) { m = std::max(m, e.asymmetry); }
    return m;
  }
  /// A Carnot structure with a non-skew block cannot be geodesic orbit.
  bool refutes_go() const { return carnot && !skew_holds(); }
  /// Skew and nilpotent blocks vanish, which forces step at most 2.
  bool step_conclusion_consistent() const { return !carnot || !skew_holds() || step <= 2; }
};

namespace detail {

inline bool nilpotent_operator(const QMatrix & a)
{
  QMatrix p = a;
  for (std::size_t i = 1; i < a.rows(); ++i) { p = p * a; }
  return p.is_zero();
}

}  // namespace detail

/**
 * @brief Skew-symmetry of π_{Δ⊥} ∘ ad X on Δ⊥ for each distribution basis vector X.
 *
 * Δ⊥ is the sum of the grading layers above the first, or the declared
 * complement. The extended form is B on Δ and the identity on the chosen basis
 * of Δ⊥, so that basis is orthonormal and M_X is read off in it directly.
 */
inline SkewReport carnot_skew_test(const HomogeneousStructure & s)
{
  SkewReport rep;
  std::vector<QVector> perp;
  if (!s.grading().empty()) {
    rep.complement_source = "grading";
    rep.carnot            = true;
    rep.step              = static_cast<int>(s.grading().size());
    for (std::size_t i = 1; i < s.grading().size(); ++i) {
      for (const auto & v : s.grading()[i].basis()) { perp.push_back(v); }
    }
  } else if (s.delta_complement()) {
    rep.complement_source = "declared";
    perp                  = s.delta_complement()->basis();
  } else {
    throw HypothesisError("skew test needs a grading or a declared complement of the distribution");
  }
  rep.complement_dim = perp.size();
  const std::size_t n  = s.dim();
  const std::size_t r  = s.rank();
  std::vector<QVector> frame = s.distribution().basis();
  frame.insert(frame.end(), perp.begin(), perp.end());
  frame.insert(frame.end(), s.isotropy().basis().begin(), s.isotropy().basis().end());
  if (frame.size() != n || hsr::rank(QMatrix::from_columns(frame, n)) != n) {
    throw StructureError("distribution, its complement and k do not form a basis of g");
  }
  const QMatrix finv = inverse(QMatrix::from_columns(frame, n));
  const auto & g     = s.algebra();
  for (std::size_t a = 0; a < r; ++a) {
    const QVector & x = s.distribution().basis()[a];
    QMatrix m(perp.size(), perp.size());
    for (std::size_t j = 0; j < perp.size(); ++j) {
      const QVector c = finv * g.bracket(x, perp[j]);
      for (std::size_t i = 0; i < perp.size(); ++i) { m(i, j) = c[r + i]; }
    }
    const QMatrix sym = m + m.transpose();
    rep.entries.push_back({a, sym.to_eigen().norm(), sym.is_zero(), detail::nilpotent_operator(g.ad_matrix(x))});
  }
  return rep;
}

enum class GoStatus { affirmed_up_to_degree, refuted_with_witness, evidence_only };

inline const char * to_string(GoStatus s)
{
  switch (s) {
    case GoStatus::affirmed_up_to_degree: return "GO_affirmed_up_to_degree";
    case GoStatus::refuted_with_witness: return "GO_refuted_with_witness";
    case GoStatus::evidence_only: return "evidence_only";
  }
  return "?";
}

struct GoVerdict
{
  GoStatus status = GoStatus::evidence_only;
  int degree_cap  = 0;
  bool isotropy_connected = true;
  BracketReport brackets;
  std::optional<SkewReport> skew;
  ScanSummary scan;
  /// Distribution vector whose skew block fails, and a non-homogeneous momentum built from it.
  std::optional<Eigen::VectorXd> witness_vector;
  std::optional<Eigen::VectorXd> witness_momentum;
};

struct GoOptions
{
  int degree_cap     = 4;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned jobs      = 1;
  bool isotropy_connected = true;
  double threshold   = 1e-8;
};

/**
 * @brief Combines the bracket test, the skew test and a homogeneity scan.
 *
 * Refuted when a Carnot skew block fails; affirmed up to the cap when every
 * bracket vanishes and the isotropy is connected; otherwise evidence only.
 */
inline GoVerdict go_verdict(const HomogeneousStructure & s, const GoOptions & opt = {})
{
  GoVerdict v;
  v.degree_cap         = opt.degree_cap;
  v.isotropy_connected = opt.isotropy_connected;
  v.brackets           = go_test_bracket(s, opt.degree_cap, opt.jobs);
  if (!s.grading().empty() || s.delta_complement()) { v.skew = carnot_skew_test(s); }
  v.scan = scan_homogeneous(s, opt.samples, opt.seed, opt.jobs, opt.threshold);

  if (v.skew && v.skew->refutes_go()) {
    v.status = GoStatus::refuted_with_witness;
    const auto bad = std::find_if(v.skew->entries.begin(), v.skew->entries.end(), [](const SkewEntry & e) { return !e.skew; });
    const QVector & x = s.distribution().basis()[bad->delta_index];
    v.witness_vector  = to_eigen(x);
    // p = B̂(X + w_j): B(X, ·) on Δ, the unit covector of w_j on Δ⊥, zero on k
    std::vector<QVector> perp;
    for (std::size_t i = 1; i < s.grading().size(); ++i) {
      for (const auto & w : s.grading()[i].basis()) { perp.push_back(w); }
    }
    if (perp.empty() && s.delta_complement()) { perp = s.delta_complement()->basis(); }
    std::vector<QVector> frame = s.distribution().basis();
    frame.insert(frame.end(), perp.begin(), perp.end());
    frame.insert(frame.end(), s.isotropy().basis().begin(), s.isotropy().basis().end());
    const QMatrix dual = inverse(QMatrix::from_columns(frame, s.dim())).transpose();
    const std::size_t r = s.rank();
    for (std::size_t j = 0; j < perp.size(); ++j) {
      QVector vals = zero_qvector(s.dim());
      for (std::size_t a = 0; a < r; ++a) { vals[a] = s.metric()(bad->delta_index, a); }
      vals[r + j] = 1;
      const Eigen::VectorXd p = to_eigen(dual * vals);
      if (check_homogeneous(s, p, opt.threshold).verdict == Verdict::not_homogeneous) {
        v.witness_momentum = p;
        break;
      }
    }
  } else if (v.brackets.all_vanish() && opt.isotropy_connected) {
    v.status = GoStatus::affirmed_up_to_degree;
  } else {
    v.status = GoStatus::evidence_only;
  }
  return v;
}

}  // namespace hsr
