#include <set>

#include <gtest/gtest.h>

#include "hsr/go_analysis.hpp"
#include "hsr/models.hpp"

using namespace hsr;

namespace {

std::set<std::string> as_strings(const InvariantBasis & b)
{
  std::set<std::string> out;
  for (const auto & f : b.polynomials) { out.insert(f.to_string()); }
  return out;
}

}  // namespace

TEST(Invariants, HeisenbergUpToDegreeTwo)
{
  const auto b = invariant_polynomials(make_heisenberg().structure, 2);
  EXPECT_EQ(as_strings(b), (std::set<std::string>{"p3", "p3^2", "p1^2 + p2^2"}));
}

TEST(Invariants, CartanDegreeTwoHasFiveGenerators)
{
  const auto & s = make_cartan().structure;
  const auto b   = invariant_polynomials(s, 2);
  ASSERT_EQ(b.polynomials.size(), 6u);
  EXPECT_EQ(b.polynomials[0].to_string(), "p3");
  const std::set<std::string> want{"p3", "p1^2 + p2^2", "p4^2 + p5^2", "p3^2", "p1*p4 + p2*p5", "p1*p5 - p2*p4"};
  EXPECT_EQ(as_strings(b), want);
}

TEST(Invariants, TrivialIsotropyGivesAllMonomials)
{
  const auto b = invariant_polynomials(make_so3_generic().structure, 3);
  EXPECT_EQ(b.polynomials.size(), 3u + 6u + 10u);
}

TEST(Invariants, EveryBasisElementIsAnnihilated)
{
  for (const auto & name : {"cartan", "free_step2_rank3", "so3_axisym", "biinvariant_compact"}) {
    const auto & s = load_model(name).structure;
    const auto b   = invariant_polynomials(s, 3);
    EXPECT_FALSE(b.polynomials.empty()) << name;
    for (const auto & f : b.polynomials) {
      for (const auto & d : isotropy_derivatives(s, f)) { EXPECT_TRUE(d.is_zero()) << name << ": " << f.to_string(); }
    }
  }
}

TEST(Invariants, ThreadCountDoesNotChangeBasis)
{
  const auto & s = load_model("free_step2_rank3").structure;
  EXPECT_EQ(as_strings(invariant_polynomials(s, 3, 1)), as_strings(invariant_polynomials(s, 3, 4)));
}

TEST(Invariants, FreeStepTwoRankThreeCounts)
{
  // so(3) on R^3 ⊕ Λ²R^3 ≅ two copies of the vector representation:
  // degree 2 has |v|², |w|², v·w; degree 3 has det(v, w, ·) = 0 and no more
  const auto b = invariant_polynomials(load_model("free_step2_rank3").structure, 3);
  std::size_t d2 = 0, d3 = 0;
  for (const auto & f : b.polynomials) {
    d2 += f.degree() == 2;
    d3 += f.degree() == 3;
  }
  EXPECT_EQ(d2, 3u);
  EXPECT_EQ(d3, 0u);
}

TEST(Bracket, HeisenbergAndFreeModelsCommute)
{
  for (const auto & name : {"heisenberg", "free_step2_rank2", "free_step2_rank3", "so3_axisym", "sl2_axisym", "biinvariant_compact"}) {
    const auto rep = go_test_bracket(load_model(name).structure, 4);
    EXPECT_TRUE(rep.all_vanish()) << name;
    EXPECT_GT(rep.invariants_checked, 0u);
  }
}

TEST(Bracket, CartanTopInvariantFails)
{
  const auto rep = go_test_bracket(make_cartan().structure, 2);
  ASSERT_FALSE(rep.all_vanish());
  bool found = false;
  for (const auto & f : rep.failures) {
    if (f.invariant.to_string() == "p3") {
      found = true;
      EXPECT_EQ(f.bracket.to_string(), "p1*p4 + p2*p5");
    }
  }
  EXPECT_TRUE(found);
}

TEST(Skew, CartanBlockIsNotSkew)
{
  const auto rep = carnot_skew_test(make_cartan().structure);
  EXPECT_TRUE(rep.carnot);
  EXPECT_EQ(rep.step, 3);
  EXPECT_EQ(rep.complement_dim, 3u);
  EXPECT_FALSE(rep.skew_holds());
  EXPECT_TRUE(rep.refutes_go());
  EXPECT_GT(rep.max_asymmetry(), 0.9);
}

TEST(Skew, StepTwoModelsHaveZeroBlocks)
{
  for (const auto & name : {"heisenberg", "free_step2_rank2", "free_step2_rank4"}) {
    const auto rep = carnot_skew_test(load_model(name).structure);
    EXPECT_TRUE(rep.skew_holds()) << name;
    EXPECT_EQ(rep.max_asymmetry(), 0.0);
    EXPECT_TRUE(rep.step_conclusion_consistent());
    for (const auto & e : rep.entries) { EXPECT_TRUE(e.nilpotent); }
  }
}

TEST(Skew, MissingComplementThrows)
{
  EXPECT_THROW(carnot_skew_test(make_so3_generic().structure), HypothesisError);
}

TEST(Verdict, CartanRefutedWithWitness)
{
  GoOptions opt;
  opt.degree_cap = 2;
  opt.samples    = 50;
  const auto v   = go_verdict(make_cartan().structure, opt);
  EXPECT_EQ(v.status, GoStatus::refuted_with_witness);
  ASSERT_TRUE(v.witness_vector);
  ASSERT_TRUE(v.witness_momentum);
  EXPECT_EQ(*v.witness_momentum, (Eigen::VectorXd(6) << 1, 0, 0, 1, 0, 0).finished());
  EXPECT_EQ(check_homogeneous(make_cartan().structure, *v.witness_momentum).verdict, Verdict::not_homogeneous);
  EXPECT_FALSE(v.brackets.all_vanish());
}

TEST(Verdict, HeisenbergAffirmed)
{
  GoOptions opt;
  opt.samples = 50;
  const auto v = go_verdict(make_heisenberg().structure, opt);
  EXPECT_EQ(v.status, GoStatus::affirmed_up_to_degree);
  EXPECT_EQ(v.scan.fraction(), 1.0);
}

TEST(Verdict, DisconnectedOrFailingGivesEvidenceOnly)
{
  GoOptions opt;
  opt.degree_cap = 2;
  opt.samples    = 50;
  opt.isotropy_connected = false;
  EXPECT_EQ(go_verdict(make_so3_generic().structure, opt).status, GoStatus::evidence_only);
  opt.isotropy_connected = true;
  const auto v = go_verdict(make_rolling_sphere().structure, opt);
  EXPECT_EQ(v.status, GoStatus::evidence_only);
  EXPECT_LT(v.scan.fraction(), 1.0);
}
