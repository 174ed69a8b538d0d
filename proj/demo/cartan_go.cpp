// Why the Cartan group is not a geodesic-orbit space, three ways: a sampled
// momentum fails the homogeneity test, an invariant stops being conserved, and
// the skew test on the second layer fails.

#include <cstdio>

#include "hsr/go_analysis.hpp"
#include "hsr/homogeneity.hpp"
#include "hsr/integrator.hpp"
#include "hsr/models.hpp"

int main()
{
  const auto & s = hsr::make_cartan().structure;

  Eigen::VectorXd p(6);
  p << 1, 0, 0, 1, 0, 0;
  const auto cert = hsr::check_homogeneous(s, p);
  std::printf("p = (1,0,0,1,0,0): %s, residual %.3f\n", hsr::to_string(cert.verdict), cert.residual);

  const auto tr   = hsr::integrate_vertical(s, p, 3.0, 1e-3);
  const auto gaps = hsr::orbit_tangency_gaps(s, tr, {hsr::parse_polynomial("p1^2 + p2^2", 5), hsr::parse_polynomial("p3", 5)});
  std::printf("along the trajectory: |h1^2 + h2^2| moves by %.1e, h3 by %.3f\n", gaps[0], gaps[1]);

  const auto skew = hsr::carnot_skew_test(s);
  std::printf("skew test: max |M + M^T| = %.3f, refutes: %s\n", skew.max_asymmetry(), skew.refutes_go() ? "yes" : "no");

  const auto br = hsr::go_test_bracket(s, 3);
  std::printf("%zu invariants up to degree 3, %zu fail to commute with H, e.g. {H, %s} = %s\n", br.invariants_checked, br.failures.size(),
    br.failures.front().invariant.to_string("y").c_str(), br.failures.front().bracket.to_string("y").c_str());

  hsr::GoOptions opt;
  opt.samples = 200;
  const auto v = hsr::go_verdict(s, opt);
  std::printf("verdict: %s\n", hsr::to_string(v.status));
}
