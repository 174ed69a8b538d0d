#include <cmath>

#include <gtest/gtest.h>

#include "hsr/homogeneity.hpp"
#include "hsr/integrator.hpp"
#include "hsr/models.hpp"

using namespace hsr;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v)
{
  Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) { r[i++] = x; }
  return r;
}

}  // namespace

TEST(Homogeneity, HeisenbergWitnessIsRotationPlusTranslation)
{
  const auto & s = make_heisenberg().structure;
  const auto c   = check_homogeneous(s, vec({1, 0, 2, 0}));
  ASSERT_EQ(c.verdict, Verdict::homogeneous);
  ASSERT_TRUE(c.witness);
  EXPECT_LT((*c.witness - vec({1, 0, 0, 2})).norm(), 1e-12);
  EXPECT_LT(witness_residual(s, vec({1, 0, 2, 0}), *c.witness), 1e-12);
}

TEST(Homogeneity, ExactWitnessAgreesForHeisenberg)
{
  const auto & s = make_heisenberg().structure;
  const auto w   = exact_witness(s, {Rational(1), Rational(0), Rational(2), Rational(0)});
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (QVector{Rational(1), Rational(0), Rational(0), Rational(2)}));
}

TEST(Homogeneity, CartanSplitsOnTopLayer)
{
  const auto & s = make_cartan().structure;
  EXPECT_EQ(check_homogeneous(s, vec({0.6, 0.8, 1.5, 0, 0, 0})).verdict, Verdict::homogeneous);
  const auto bad = check_homogeneous(s, vec({1, 0, 0, 1, 0, 0}));
  EXPECT_EQ(bad.verdict, Verdict::not_homogeneous);
  EXPECT_NEAR(bad.residual, 0.5, 1e-12);
  EXPECT_FALSE(exact_witness(s, {Rational(1), Rational(0), Rational(0), Rational(1), Rational(0), Rational(0)}));
  // fixed points: h3 = 0 and h1 h4 + h2 h5 = 0
  EXPECT_EQ(check_homogeneous(s, vec({1, 0, 0, 0, 1, 0})).verdict, Verdict::homogeneous);
}

TEST(Homogeneity, ZeroMomentumIsHomogeneous)
{
  for (const auto & name : model_names()) {
    const auto & s = load_model(name).structure;
    EXPECT_EQ(check_homogeneous(s, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dim()))).verdict, Verdict::homogeneous) << name;
  }
}

TEST(Homogeneity, VerdictIsScaleInvariant)
{
  for (const auto & name : {"heisenberg", "cartan", "rolling_sphere", "so3_generic"}) {
    const auto & s = load_model(name).structure;
    const MomentumSampler sampler(s);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Eigen::VectorXd p = sampler(7, i);
      EXPECT_EQ(check_homogeneous(s, p).verdict, check_homogeneous(s, 3.0 * p).verdict) << name << " " << i;
    }
  }
}

TEST(Homogeneity, WitnessesAreSound)
{
  for (const auto & name : model_names()) {
    const auto & s = load_model(name).structure;
    const MomentumSampler sampler(s);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Eigen::VectorXd p = sampler(3, i);
      const auto c            = check_homogeneous(s, p);
      if (c.verdict != Verdict::homogeneous) { continue; }
      EXPECT_LT(witness_residual(s, p, *c.witness), 1e-7) << name;
      // the witness differs from dH(p) by an element of k
      const Eigen::VectorXd z = *c.witness - dH(s, p);
      const Eigen::MatrixXd & kb = s.k_basis_matrix();
      if (kb.cols() == 0) {
        EXPECT_LT(z.norm(), 1e-12);
      } else {
        const Eigen::VectorXd c2 = kb.completeOrthogonalDecomposition().solve(z);
        EXPECT_LT((kb * c2 - z).norm(), 1e-9) << name;
      }
    }
  }
}

TEST(Homogeneity, WrongLengthThrows)
{
  EXPECT_THROW(check_homogeneous(make_heisenberg().structure, vec({1, 2})), DimensionError);
}

TEST(Scan, HomogeneousModelsScoreOne)
{
  for (const auto & name : {"heisenberg", "free_step2_rank2", "free_step2_rank3", "so3_axisym", "biinvariant_compact"}) {
    const auto sum = scan_homogeneous(load_model(name).structure, 200, 0);
    EXPECT_EQ(sum.fraction(), 1.0) << name;
    EXPECT_TRUE(sum.counterexamples.empty());
  }
  EXPECT_EQ(scan_homogeneous(make_abelian(3).structure, 50, 1).fraction(), 1.0);
}

TEST(Scan, CartanIsAlmostNeverHomogeneous)
{
  const auto sum = scan_homogeneous(make_cartan().structure, 300, 0);
  EXPECT_EQ(sum.homogeneous, 0u);
  ASSERT_EQ(sum.counterexamples.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) { EXPECT_EQ(sum.counterexamples[i].index, i); }
}

TEST(Scan, ThreadCountDoesNotChangeResults)
{
  const auto & s = make_cartan().structure;
  const auto a   = scan_homogeneous(s, 150, 42, 1);
  const auto b   = scan_homogeneous(s, 150, 42, 4);
  EXPECT_EQ(a.homogeneous, b.homogeneous);
  ASSERT_EQ(a.counterexamples.size(), b.counterexamples.size());
  for (std::size_t i = 0; i < a.counterexamples.size(); ++i) {
    EXPECT_EQ(a.counterexamples[i].index, b.counterexamples[i].index);
    EXPECT_EQ(a.counterexamples[i].momentum, b.counterexamples[i].momentum);
  }
}

TEST(Scan, SamplesLieOnEnergyShellInAnnihilator)
{
  for (const auto & name : model_names()) {
    const auto & s = load_model(name).structure;
    const MomentumSampler sampler(s);
    for (std::uint64_t i = 0; i < 10; ++i) {
      const Eigen::VectorXd p = sampler(5, i);
      EXPECT_NEAR(hamiltonian_value(s, p), 0.5, 1e-12) << name;
      EXPECT_LT(s.isotropy_residual(p), 1e-12) << name;
    }
  }
}

TEST(OrbitTangency, HeisenbergInvariantsAreConstant)
{
  const auto & s = make_heisenberg().structure;
  const auto tr  = integrate_vertical(s, vec({0.6, 0.8, 1.3, 0}), 5.0, 1e-2);
  const auto rep = orbit_tangency_check(s, tr, {parse_polynomial("p1^2 + p2^2", 3), parse_polynomial("p3", 3)});
  EXPECT_TRUE(rep.consistent()) << rep.max_gap();
}

TEST(OrbitTangency, CartanNonHomogeneousMovesTopInvariant)
{
  const auto & s = make_cartan().structure;
  const auto tr  = integrate_vertical(s, vec({1, 0, 0, 1, 0, 0}), 2.0, 1e-2);
  const auto rep = orbit_tangency_check(s, tr, {parse_polynomial("p1^2 + p2^2", 5), parse_polynomial("p3", 5)});
  EXPECT_LT(rep.gaps[0], 1e-8);
  EXPECT_GT(rep.gaps[1], 0.1);
  EXPECT_FALSE(rep.consistent());
}
