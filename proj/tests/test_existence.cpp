#include <gtest/gtest.h>

#include "hsr/existence.hpp"
#include "hsr/models.hpp"

using namespace hsr;

namespace {

bool same_constants(const LieAlgebra & a, const LieAlgebra & b)
{
  if (a.dim() != b.dim()) { return false; }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      for (std::size_t k = 0; k < a.dim(); ++k) {
        if (a.constant(i, j, k) != b.constant(i, j, k)) { return false; }
      }
    }
  }
  return true;
}

Subspace span_of(std::initializer_list<std::size_t> idx, std::size_t n)
{
  std::vector<QVector> b;
  for (auto i : idx) { b.push_back(unit_qvector(n, i)); }
  return Subspace::from_basis(b, n);
}

}  // namespace

TEST(Factorize, CartanByTopLayerIsHeisenberg)
{
  const auto & c = make_cartan().structure;
  const auto f   = factorize_by_ideal(c, span_of({3, 4}, 6));
  const auto & h = make_heisenberg().structure;
  EXPECT_TRUE(same_constants(f.quotient.algebra(), h.algebra()));
  EXPECT_EQ(f.quotient.isotropy(), h.isotropy());
  EXPECT_EQ(f.quotient.complement(), h.complement());
  EXPECT_EQ(f.quotient.distribution(), h.distribution());
  EXPECT_EQ(f.quotient.metric(), h.metric());
  EXPECT_EQ(f.quotient.grading().size(), 2u);
  EXPECT_TRUE(validate_structure(f.quotient).valid());
}

TEST(Factorize, ZeroIdealIsIdentity)
{
  const auto & c = make_cartan().structure;
  const auto f   = factorize_by_ideal(c, Subspace(6));
  EXPECT_TRUE(same_constants(f.quotient.algebra(), c.algebra()));
  EXPECT_EQ(f.projection, QMatrix::identity(6));
  EXPECT_EQ(f.quotient.distribution(), c.distribution());
}

TEST(Factorize, RejectsNonIdealAndDistributionInside)
{
  const auto & c = make_cartan().structure;
  EXPECT_THROW(factorize_by_ideal(c, span_of({0}, 6)), HypothesisError);
  const auto & h = make_heisenberg().structure;
  EXPECT_THROW(factorize_by_ideal(h, span_of({0, 1, 2}, 4)), HypothesisError);
}

TEST(Factorize, RollingSphereByTranslations)
{
  const auto & s = make_rolling_sphere().structure;
  const auto f   = factorize_by_ideal(s, span_of({3, 4}, 5));
  EXPECT_EQ(f.quotient.dim(), 3u);
  // Δ ∩ R² = 0, so the whole rank-3 distribution survives with its metric
  EXPECT_EQ(f.quotient.rank(), 3u);
  EXPECT_EQ(f.quotient.metric(), QMatrix::identity(3));
  EXPECT_TRUE(validate_structure(f.quotient).valid());
}

TEST(Factorize, LiftingPreservesHomogeneity)
{
  const auto & c = make_cartan().structure;
  const auto f   = factorize_by_ideal(c, span_of({3, 4}, 6));
  const MomentumSampler sampler(f.quotient);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const Eigen::VectorXd ph = sampler(11, i);
    ASSERT_EQ(check_homogeneous(f.quotient, ph).verdict, Verdict::homogeneous);
    const Eigen::VectorXd p = f.lift(ph);
    EXPECT_EQ(check_homogeneous(c, p).verdict, Verdict::homogeneous) << i;
    EXPECT_NEAR(hamiltonian_value(c, p), 0.5, 1e-12);
  }
}

TEST(Existence, HeisenbergSolvableRoute)
{
  const auto r = construct_homogeneous_geodesic(make_heisenberg().structure);
  EXPECT_EQ(r.route, ExistenceRoute::solvable_case);
  EXPECT_EQ(r.momentum, (Eigen::VectorXd(4) << 1, 0, 0, 0).finished());
  EXPECT_EQ(r.certificate.verdict, Verdict::homogeneous);
  EXPECT_FALSE(verify_eigenconstruction(make_heisenberg().structure, r).ok);
}

TEST(Existence, CartanSolvableRouteAndViaQuotient)
{
  const auto & c = make_cartan().structure;
  const auto r   = construct_homogeneous_geodesic(c);
  EXPECT_EQ(r.route, ExistenceRoute::solvable_case);
  EXPECT_EQ(check_homogeneous(c, r.momentum).verdict, Verdict::homogeneous);

  const auto f  = factorize_by_ideal(c, span_of({3, 4}, 6));
  const auto rq = construct_homogeneous_geodesic(f.quotient);
  EXPECT_EQ(check_homogeneous(c, f.lift(rq.momentum)).verdict, Verdict::homogeneous);
}

TEST(Existence, AbelianAnyMomentum)
{
  const auto r = construct_homogeneous_geodesic(make_abelian(3).structure);
  EXPECT_EQ(r.route, ExistenceRoute::solvable_case);
  EXPECT_GT(r.momentum.norm(), 0.0);
}

TEST(Existence, So3KpEigenvector)
{
  const auto & s = load_model("so3_kp").structure;
  const auto r   = construct_homogeneous_geodesic(s);
  EXPECT_EQ(r.route, ExistenceRoute::factorized);
  ASSERT_TRUE(r.audit.eigen);
  EXPECT_EQ(r.audit.factored_ideals.size(), 1u);
  EXPECT_NEAR(r.audit.eigen->eigenvalue, -0.5, 1e-12);
  EXPECT_EQ(r.audit.eigen->gamma.dim(), 2u);
  EXPECT_LT((r.audit.eigen->eigenvector - Eigen::Vector3d(1, 0, 0)).norm(), 1e-12);
  EXPECT_TRUE(verify_eigenconstruction(s, r).ok);
  EXPECT_GT(hamiltonian_value(s, r.momentum), 0.0);
}

TEST(Existence, Sl2ModelsVerify)
{
  for (const auto & name : {"sl2_kp", "sl2_axisym", "so3_axisym"}) {
    const auto & s = load_model(name).structure;
    const auto r   = construct_homogeneous_geodesic(s);
    EXPECT_TRUE(verify_eigenconstruction(s, r).ok) << name;
    EXPECT_EQ(r.certificate.verdict, Verdict::homogeneous);
    EXPECT_GT(hamiltonian_value(s, r.momentum), 0.0);
  }
}

TEST(Existence, TamperedEigenvectorFails)
{
  const auto & s = load_model("so3_kp").structure;
  auto r         = construct_homogeneous_geodesic(s);
  auto out      = r;
  r.audit.eigen->eigenvector[1] += 1e-3;
  EXPECT_FALSE(verify_eigenconstruction(s, r).ok);
  out.audit.eigen->eigenvector[2] += 1e-3;
  const auto c = verify_eigenconstruction(s, out);
  EXPECT_FALSE(c.ok);
  EXPECT_GT(c.gamma_distance, 1e-4);
}

TEST(Existence, SemisimpleWithoutFactorization)
{
  const auto & s = make_biinvariant_compact().structure;
  const auto r   = construct_homogeneous_geodesic(s);
  EXPECT_EQ(r.route, ExistenceRoute::eigenvector);
  EXPECT_TRUE(verify_eigenconstruction(s, r).ok);

  const auto & g = make_so3_generic().structure;
  const auto rg  = construct_homogeneous_geodesic(g);
  EXPECT_TRUE(verify_eigenconstruction(g, rg).ok);
}

TEST(Existence, EveryBundledModelGetsACertifiedGeodesic)
{
  for (const auto & name : model_names()) {
    const auto & s = load_model(name).structure;
    const auto r   = construct_homogeneous_geodesic(s);
    EXPECT_EQ(check_homogeneous(s, r.momentum).verdict, Verdict::homogeneous) << name;
    EXPECT_GT(r.momentum.norm(), 0.0) << name;
    EXPECT_LT(s.isotropy_residual(r.momentum), 1e-12) << name;
  }
}

TEST(Existence, GammaSplitsTheReducedAlgebra)
{
  for (const auto & name : {"so3_kp", "sl2_kp", "so3_generic"}) {
    const auto r = construct_homogeneous_geodesic(load_model(name).structure);
    ASSERT_TRUE(r.audit.eigen);
    const auto & e = *r.audit.eigen;
    const std::size_t n = r.audit.reduced->dim();
    for (const auto & v : e.gamma.basis()) { EXPECT_TRUE(e.gamma.contains(e.operator_a * v)); }
    EXPECT_TRUE(e.extended_metric.is_symmetric());
    EXPECT_TRUE(is_positive_definite(e.extended_metric));
    EXPECT_EQ(hsr::rank(e.killing), n);
  }
}
