#pragma once

/**
 * @file
 * @brief Homogeneity test for geodesics from their initial momentum, with witnesses and sampling scans.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "hsr/hamiltonian.hpp"
#include "hsr/integrator.hpp"
#include "hsr/polynomial.hpp"
#include "hsr/sampling.hpp"
#include "hsr/structure.hpp"

namespace hsr {

enum class Verdict { homogeneous, not_homogeneous, inconclusive };

inline const char * to_string(Verdict v)
{
  switch (v) {
    case Verdict::homogeneous: return "homogeneous";
    case Verdict::not_homogeneous: return "not_homogeneous";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct HomogeneityCertificate
{
  Verdict verdict = Verdict::inconclusive;
  /// X = dH(p) + z with z in k; present for homogeneous verdicts.
  std::optional<Eigen::VectorXd> witness;
  double residual  = 0.0;
  double threshold = 0.0;
  bool exact_retry = false;
};

/**
 * @brief Exact feasibility of p([dH(p) + z, Y_j]) = 0 over z in k.
 *
 * Returns the geodesic vector dH(p) + z for some solution z, or nothing when
 * the system is inconsistent.
 */
inline std::optional<QVector> exact_witness(const HomogeneousStructure & s, const QVector & p)
{
  const auto & g   = s.algebra();
  const QVector x  = dH(s, p);
  const QVector rhs0 = g.coad_apply(x, p);
  const auto & kb  = s.isotropy().basis();
  if (kb.empty()) {
    if (is_zero(rhs0)) { return x; }
    return std::nullopt;
  }
  QMatrix a(s.dim(), kb.size());
  for (std::size_t l = 0; l < kb.size(); ++l) {
    const QVector col = g.coad_apply(kb[l], p);
    for (std::size_t j = 0; j < s.dim(); ++j) { a(j, l) = col[j]; }
  }
  QVector b(s.dim());
  for (std::size_t j = 0; j < s.dim(); ++j) { b[j] = -rhs0[j]; }
  const auto z = solve(a, b);
  if (!z) { return std::nullopt; }
  QVector w = x;
  for (std::size_t l = 0; l < kb.size(); ++l) {
    for (std::size_t i = 0; i < s.dim(); ++i) { w[i] += (*z)[l] * kb[l][i]; }
  }
  return w;
}

/**
 * @brief Decides whether the geodesic with initial momentum p is homogeneous.
 *
 * Solves A z = b with A[j][l] = p([k_l, Y_j]) and b[j] = -p([dH(p), Y_j]) by
 * minimum-norm least squares. The relative residual ‖Az - b‖ / (1 + ‖b‖) is
 * compared with the threshold; residuals in [threshold, 10·threshold] are
 * re-decided in exact arithmetic on the binary value of p.
 */
inline HomogeneityCertificate check_homogeneous(const HomogeneousStructure & s, const Eigen::VectorXd & p, double threshold = 1e-8)
{
  if (static_cast<std::size_t>(p.size()) != s.dim()) { throw DimensionError("momentum has wrong length"); }
  const auto & g = s.algebra();
  const Eigen::VectorXd x = dH(s, p);
  const Eigen::VectorXd b = -g.coad_apply(x, p);
  const Eigen::MatrixXd & kb = s.k_basis_matrix();
  const auto dk = kb.cols();

  Eigen::VectorXd z = Eigen::VectorXd::Zero(dk);
  Eigen::VectorXd res = -b;
  if (dk > 0) {
    Eigen::MatrixXd a(p.size(), dk);
    for (Eigen::Index l = 0; l < dk; ++l) { a.col(l) = g.coad_apply(Eigen::VectorXd(kb.col(l)), p); }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    z   = svd.solve(b);
    res = a * z - b;
  }

  HomogeneityCertificate cert;
  cert.threshold = threshold;
  cert.residual  = res.norm() / (1.0 + b.norm());
  if (cert.residual < threshold) {
    cert.verdict = Verdict::homogeneous;
    cert.witness = x + kb * z;
  } else if (cert.residual <= 10.0 * threshold) {
    cert.exact_retry = true;
    if (const auto w = exact_witness(s, from_eigen(p))) {
      cert.verdict = Verdict::homogeneous;
      cert.witness = to_eigen(*w);
    } else {
      cert.verdict = Verdict::inconclusive;
    }
  } else {
    cert.verdict = Verdict::not_homogeneous;
  }
  return cert;
}

/// max_j |p([X, Y_j])|, recomputed without the solver.
inline double witness_residual(const HomogeneousStructure & s, const Eigen::VectorXd & p, const Eigen::VectorXd & x)
{
  return s.algebra().coad_apply(x, p).cwiseAbs().maxCoeff();
}

/// sup_t |F(p(t)|m) - F(p(0)|m)| for each invariant written in m* coordinates.
inline std::vector<double> orbit_tangency_gaps(const HomogeneousStructure & s, const Trajectory & tr, const std::vector<QPolynomial> & invariants)
{
  std::vector<Polynomial<double>> fs;
  for (const auto & f : invariants) { fs.push_back(f.to_double_poly()); }
  std::vector<double> gaps(fs.size(), 0.0);
  if (tr.momenta.empty()) { return gaps; }
  const Eigen::VectorXd y0 = s.restrict_to_m(tr.momenta.front());
  std::vector<double> f0;
  for (const auto & f : fs) { f0.push_back(f.evaluate(y0)); }
  for (const auto & p : tr.momenta) {
    const Eigen::VectorXd y = s.restrict_to_m(p);
    for (std::size_t i = 0; i < fs.size(); ++i) { gaps[i] = std::max(gaps[i], std::abs(fs[i].evaluate(y) - f0[i])); }
  }
  return gaps;
}

struct OrbitTangencyReport
{
  std::vector<double> gaps;
  double tolerance = 1e-8;

  bool consistent() const
  {
    return std::all_of(gaps.begin(), gaps.end(), [&](double d) { return d < tolerance; });
  }
  double max_gap() const { return gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end()); }
};

inline OrbitTangencyReport orbit_tangency_check(const HomogeneousStructure & s, const Trajectory & tr, const std::vector<QPolynomial> & invariants,
  double tolerance = 1e-8)
{
  return {orbit_tangency_gaps(s, tr, invariants), tolerance};
}

struct Counterexample
{
  std::uint64_t index;
  Eigen::VectorXd momentum;
  double residual;
};

struct ScanSummary
{
  std::size_t samples      = 0;
  std::size_t homogeneous  = 0;
  std::size_t inconclusive = 0;
  std::vector<Counterexample> counterexamples;

  double fraction() const { return samples == 0 ? 0.0 : static_cast<double>(homogeneous) / static_cast<double>(samples); }
};

/// Runs body(i) for i in [0, count) on up to `jobs` threads; results must be written per index.
template<class Body>
void parallel_for(std::size_t count, unsigned jobs, Body body)
{
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) { body(i); }
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += jobs) { body(i); }
    });
  }
  for (auto & t : pool) { t.join(); }
}

/// Seeded sampling of H = ½ within the annihilator of k; counterexamples are the first ten by index.
inline ScanSummary scan_homogeneous(const HomogeneousStructure & s, std::size_t samples, std::uint64_t seed, unsigned jobs = 1,
  double threshold = 1e-8)
{
  const MomentumSampler sampler(s);
  std::vector<Eigen::VectorXd> ps(samples);
  std::vector<HomogeneityCertificate> certs(samples);
  parallel_for(samples, jobs, [&](std::size_t i) {
    ps[i]    = sampler(seed, i);
    certs[i] = check_homogeneous(s, ps[i], threshold);
  });
  ScanSummary sum;
  sum.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    switch (certs[i].verdict) {
      case Verdict::homogeneous: ++sum.homogeneous; break;
      case Verdict::inconclusive: ++sum.inconclusive; break;
      case Verdict::not_homogeneous:
        if (sum.counterexamples.size() < 10) { sum.counterexamples.push_back({i, ps[i], certs[i].residual}); }
        break;
    }
  }
  return sum;
}

}  // namespace hsr
