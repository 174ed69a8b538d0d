#include <random>

#include <gtest/gtest.h>

#include "hsr/lie_algebra.hpp"

using namespace hsr;

namespace {

LieAlgebra heisenberg3()
{
  return LieAlgebra::from_brackets(3, {{0, 1, {0, 0, 1}}});
}

LieAlgebra so3()
{
  return LieAlgebra::from_brackets(3, {{0, 1, {0, 0, 1}}, {1, 2, {1, 0, 0}}, {2, 0, {0, 1, 0}}});
}

LieAlgebra cartan5()
{
  return LieAlgebra::from_brackets(5, {{0, 1, {0, 0, 1, 0, 0}}, {0, 2, {0, 0, 0, 1, 0}}, {1, 2, {0, 0, 0, 0, 1}}});
}

LieAlgebra rolling()
{
  // so3 on V1..V3, abelian R^2 on e1, e2
  return LieAlgebra::from_brackets(5, {{0, 1, {0, 0, 1, 0, 0}}, {1, 2, {1, 0, 0, 0, 0}}, {2, 0, {0, 1, 0, 0, 0}}});
}

QVector random_rational(std::mt19937_64 & rng, std::size_t n)
{
  std::uniform_int_distribution<int> d(-9, 9);
  QVector v(n);
  for (auto & x : v) { x = Rational(d(rng), 1 + (d(rng) + 9) % 5); }
  return v;
}

}  // namespace

TEST(Bracket, HeisenbergAndCartan)
{
  auto h = heisenberg3();
  EXPECT_EQ(h.bracket(unit_qvector(3, 0), unit_qvector(3, 1)), unit_qvector(3, 2));
  auto c = cartan5();
  EXPECT_EQ(c.bracket(unit_qvector(5, 0), unit_qvector(5, 2)), unit_qvector(5, 3));
  EXPECT_THROW(h.bracket(QVector(2), QVector(3)), DimensionError);
}

TEST(Bracket, SelfBracketVanishes)
{
  std::mt19937_64 rng(7);
  for (const auto & g : {heisenberg3(), so3(), cartan5()}) {
    auto x = random_rational(rng, g.dim());
    EXPECT_TRUE(is_zero(g.bracket(x, x)));
  }
}

TEST(Validate, BundledAlgebrasAreValid)
{
  EXPECT_TRUE(validate(cartan5()).valid());
  EXPECT_TRUE(validate(so3()).valid());
  EXPECT_TRUE(validate(rolling()).valid());
}

TEST(Validate, ReportsAntisymmetryViolation)
{
  LieAlgebra g(3, {{0, 1, 2, 1}});
  auto rep = validate(g);
  ASSERT_FALSE(rep.valid());
  const auto & v = rep.violations.front();
  EXPECT_EQ(v.kind, Violation::Kind::antisymmetry);
  EXPECT_EQ(v.i, 0u);
  EXPECT_EQ(v.j, 1u);
  EXPECT_EQ(v.k, 2u);
  EXPECT_NE(v.describe().find("(1,2,3)"), std::string::npos);
}

TEST(Validate, ReportsJacobiViolation)
{
  // [e1,e2]=e3, [e1,e3]=e1: Jacobi fails on (1,2,3)
  auto g = LieAlgebra::from_brackets(3, {{0, 1, {0, 0, 1}}, {0, 2, {1, 0, 0}}, {1, 2, {0, 1, 0}}});
  auto rep = validate(g);
  ASSERT_FALSE(rep.valid());
  EXPECT_EQ(rep.violations.front().kind, Violation::Kind::jacobi);
}

TEST(AdMatrix, Examples)
{
  auto h = heisenberg3();
  QMatrix expected(3, 3);
  expected(2, 1) = 1;
  EXPECT_EQ(h.ad_matrix(unit_qvector(3, 0)), expected);
  EXPECT_TRUE(h.ad_matrix(zero_qvector(3)).is_zero());

  QMatrix rot(3, 3);
  rot(1, 0) = 1;
  rot(0, 1) = -1;
  EXPECT_EQ(so3().ad_matrix(unit_qvector(3, 2)), rot);

  Eigen::Vector3d x(0, 0, 1);
  EXPECT_TRUE(so3().ad_matrix(x).isApprox(rot.to_eigen()));
}

TEST(CoadApply, Examples)
{
  auto h = heisenberg3();
  EXPECT_EQ(h.coad_apply(unit_qvector(3, 0), QVector{1, 0, 1}), (QVector{0, 1, 0}));
  EXPECT_TRUE(is_zero(h.coad_apply(QVector{1, 2, 3}, zero_qvector(3))));
  EXPECT_EQ(cartan5().coad_apply(unit_qvector(5, 0), QVector{0, 0, 1, 0, 0}), (QVector{0, 1, 0, 0, 0}));
}

TEST(CoadApply, MatchesBracketPairing)
{
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  for (const auto & g : {heisenberg3(), so3(), cartan5(), rolling()}) {
    const auto n = static_cast<Eigen::Index>(g.dim());
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd x(n), p(n), xi(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        x[i]  = n01(rng);
        p[i]  = n01(rng);
        xi[i] = n01(rng);
      }
      EXPECT_NEAR(g.coad_apply(x, p).dot(xi), p.dot(g.bracket(x, xi)), 1e-12);
    }
  }
}

TEST(Jacobi, RandomVectorsExactAndFloat)
{
  std::mt19937_64 rng(3);
  for (const auto & g : {heisenberg3(), so3(), cartan5(), rolling()}) {
    for (int t = 0; t < 10; ++t) {
      auto a = random_rational(rng, g.dim()), b = random_rational(rng, g.dim()), c = random_rational(rng, g.dim());
      QVector s = g.bracket(a, g.bracket(b, c));
      const auto s2 = g.bracket(b, g.bracket(c, a));
      const auto s3 = g.bracket(c, g.bracket(a, b));
      for (std::size_t k = 0; k < s.size(); ++k) { s[k] += s2[k] + s3[k]; }
      EXPECT_TRUE(is_zero(s));
      auto fa = to_eigen(a), fb = to_eigen(b), fc = to_eigen(c);
      Eigen::VectorXd fs = g.bracket(fa, g.bracket(fb, fc)) + g.bracket(fb, g.bracket(fc, fa)) + g.bracket(fc, g.bracket(fa, fb));
      EXPECT_LT(fs.norm(), 1e-12);
    }
  }
}

TEST(Killing, FormsAndKernels)
{
  EXPECT_TRUE(killing_form(heisenberg3()).is_zero());
  EXPECT_TRUE(killing_form(cartan5()).is_zero());
  QMatrix m2 = QMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i) { m2(i, i) = -2; }
  EXPECT_EQ(killing_form(so3()), m2);

  EXPECT_TRUE(killing_kernel(so3()).is_zero());
  EXPECT_EQ(killing_kernel(heisenberg3()), Subspace::whole(3));
  EXPECT_EQ(killing_kernel(rolling()), Subspace::from_basis({unit_qvector(5, 3), unit_qvector(5, 4)}, 5));
}

TEST(Killing, AdInvariance)
{
  std::mt19937_64 rng(5);
  for (const auto & g : {so3(), rolling(), cartan5()}) {
    const Eigen::MatrixXd k = killing_form(g).to_eigen();
    for (int t = 0; t < 10; ++t) {
      auto x = to_eigen(random_rational(rng, g.dim())), y = to_eigen(random_rational(rng, g.dim())), z = to_eigen(random_rational(rng, g.dim()));
      const double s = g.bracket(z, x).dot(k * y) + x.dot(k * g.bracket(z, y));
      EXPECT_NEAR(s, 0.0, 1e-12);
    }
  }
}

TEST(Subalgebras, IdealsAndGeneration)
{
  auto c = cartan5();
  auto g3 = Subspace::from_basis({unit_qvector(5, 3), unit_qvector(5, 4)}, 5);
  EXPECT_TRUE(is_ideal(c, g3));
  auto g1 = Subspace::from_basis({unit_qvector(5, 0), unit_qvector(5, 1)}, 5);
  EXPECT_FALSE(is_subalgebra(c, g1));
  EXPECT_EQ(generated_subalgebra(c, g1), Subspace::whole(5));
}
