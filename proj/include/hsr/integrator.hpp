#pragma once

/**
 * @file
 * @brief RK4 integration of the vertical system, horizontal reconstruction, closed forms and fixed points.
 */

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "hsr/hamiltonian.hpp"
#include "hsr/polynomial.hpp"
#include "hsr/sampling.hpp"
#include "hsr/structure.hpp"

namespace hsr {

class IntegrationError : public Error
{
public:
  using Error::Error;
};

struct Trajectory
{
  std::vector<double> times;
  std::vector<Eigen::VectorXd> momenta;
  std::vector<Eigen::MatrixXd> group_points;
  std::vector<double> energy;
  /// casimir_values[i][c] is Casimir c at sample i.
  std::vector<std::vector<double>> casimir_values;
  bool aborted = false;
  std::string abort_reason;

  std::size_t size() const { return times.size(); }

  double max_energy_drift() const
  {
    double d = 0.0;
    for (double h : energy) { d = std::max(d, std::abs(h - energy.front())); }
    return d;
  }

  std::vector<double> max_casimir_drift() const
  {
    if (casimir_values.empty()) { return {}; }
    std::vector<double> d(casimir_values.front().size(), 0.0);
    for (const auto & row : casimir_values) {
      for (std::size_t c = 0; c < d.size(); ++c) { d[c] = std::max(d[c], std::abs(row[c] - casimir_values.front()[c])); }
    }
    return d;
  }
};

namespace detail {

inline Eigen::VectorXd rk4_step(const HomogeneousStructure & s, const Eigen::VectorXd & p, double h)
{
  const Eigen::VectorXd k1 = vertical_field(s, p);
  const Eigen::VectorXd k2 = vertical_field(s, p + 0.5 * h * k1);
  const Eigen::VectorXd k3 = vertical_field(s, p + 0.5 * h * k2);
  const Eigen::VectorXd k4 = vertical_field(s, p + h * k3);
  return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void record(Trajectory & tr, const HomogeneousStructure & s, const std::vector<Polynomial<double>> & cas, double t, const Eigen::VectorXd & p)
{
  tr.times.push_back(t);
  tr.momenta.push_back(p);
  tr.energy.push_back(hamiltonian_value(s, p));
  std::vector<double> cv;
  cv.reserve(cas.size());
  for (const auto & c : cas) { cv.push_back(c.evaluate(p)); }
  tr.casimir_values.push_back(std::move(cv));
}

}  // namespace detail

/**
 * @brief Classical fixed-step RK4 for ṗ = p([dH(p), ·]) on [0, T].
 *
 * Samples every step; the last step is shortened to land on T. A non-finite
 * state stops the run and keeps the samples computed so far.
 */
inline Trajectory integrate_vertical(const HomogeneousStructure & s, const Eigen::VectorXd & p0, double T, double step,
  const std::vector<QPolynomial> & casimirs = {})
{
  if (!(T > 0.0) || !std::isfinite(T)) { throw IntegrationError("integration time T must be positive"); }
  if (!(step > 0.0) || step > T) { throw IntegrationError("step must satisfy 0 < step <= T"); }
  if (static_cast<std::size_t>(p0.size()) != s.dim()) { throw DimensionError("initial momentum has wrong length"); }
  std::vector<Polynomial<double>> cas;
  for (const auto & c : casimirs) { cas.push_back(c.to_double_poly()); }

  const auto nsteps = static_cast<long>(std::ceil(T / step - 1e-9));
  Trajectory tr;
  tr.times.reserve(static_cast<std::size_t>(nsteps) + 1);
  tr.momenta.reserve(static_cast<std::size_t>(nsteps) + 1);
  Eigen::VectorXd p = p0;
  detail::record(tr, s, cas, 0.0, p);
  for (long i = 1; i <= nsteps; ++i) {
    const double t = i == nsteps ? T : static_cast<double>(i) * step;
    const Eigen::VectorXd next = detail::rk4_step(s, p, t - tr.times.back());
    if (!next.allFinite()) {
      tr.aborted      = true;
      tr.abort_reason = "non-finite state after t = " + std::to_string(tr.times.back());
      break;
    }
    p = next;
    detail::record(tr, s, cas, t, p);
  }
  return tr;
}

/// ρ(x) = Σ x_i ρ(e_i) in double precision.
inline Eigen::MatrixXd represent(const std::vector<Eigen::MatrixXd> & rho, const Eigen::VectorXd & x)
{
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rho.front().rows(), rho.front().cols());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (x[static_cast<Eigen::Index>(i)] != 0.0) { m += x[static_cast<Eigen::Index>(i)] * rho[i]; }
  }
  return m;
}

/**
 * @brief Fills group_points by RK4 on Ġ = G ρ(dH(p(t))), G(0) = I.
 *
 * p at half steps comes from cubic Hermite interpolation between samples,
 * using the vertical field as the end slopes.
 */
inline Trajectory integrate_horizontal(const HomogeneousStructure & s, Trajectory tr)
{
  if (s.representation().empty()) { throw IntegrationError("structure has no matrix representation"); }
  std::vector<Eigen::MatrixXd> rho;
  for (const auto & r : s.representation()) { rho.push_back(r.to_eigen()); }
  auto a = [&](const Eigen::VectorXd & p) { return represent(rho, dH(s, p)); };

  const auto dim = rho.front().rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim, dim);
  tr.group_points.assign(1, g);
  for (std::size_t i = 1; i < tr.size(); ++i) {
    const double h               = tr.times[i] - tr.times[i - 1];
    const Eigen::VectorXd & p0   = tr.momenta[i - 1];
    const Eigen::VectorXd & p1   = tr.momenta[i];
    const Eigen::VectorXd mid    = 0.5 * (p0 + p1) + (h / 8.0) * (vertical_field(s, p0) - vertical_field(s, p1));
    const Eigen::MatrixXd a0     = a(p0);
    const Eigen::MatrixXd am     = a(mid);
    const Eigen::MatrixXd a1     = a(p1);
    const Eigen::MatrixXd k1     = g * a0;
    const Eigen::MatrixXd k2     = (g + 0.5 * h * k1) * am;
    const Eigen::MatrixXd k3     = (g + 0.5 * h * k2) * am;
    const Eigen::MatrixXd k4     = (g + h * k3) * a1;
    g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tr.group_points.push_back(g);
  }
  return tr;
}

/// p0 ∘ exp(-θ ad(axis)) with θ = κ·p0(axis)·t.
inline Eigen::VectorXd closed_form_axisymmetric(const HomogeneousStructure & s, const QVector & axis, const Eigen::VectorXd & p0, double t,
  double kappa)
{
  const Eigen::VectorXd ax = to_eigen(axis);
  const double theta       = kappa * p0.dot(ax) * t;
  const Eigen::MatrixXd e  = (-theta * s.algebra().ad_matrix(ax)).exp();
  return e.transpose() * p0;
}

/// One CSV row per sample: t, p_1..p_n, H, Casimirs, then G row by row when present.
inline void write_trajectory_csv(std::ostream & os, const Trajectory & tr, const std::vector<std::string> & casimir_names)
{
  char buf[40];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  const auto n = tr.momenta.empty() ? 0 : tr.momenta.front().size();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) { os << ",p_" << i + 1; }
  os << ",H";
  for (const auto & c : casimir_names) { os << "," << c; }
  const bool with_g = !tr.group_points.empty();
  const auto r      = with_g ? tr.group_points.front().rows() : 0;
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) { os << ",g_" << i + 1 << "_" << j + 1; }
  }
  os << "\n";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    os << num(tr.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) { os << "," << num(tr.momenta[k][i]); }
    os << "," << num(tr.energy[k]);
    for (double c : tr.casimir_values[k]) { os << "," << num(c); }
    if (with_g && k < tr.group_points.size()) {
      for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) { os << "," << num(tr.group_points[k](i, j)); }
      }
    }
    os << "\n";
  }
}

struct FixedPointOptions
{
  int max_iterations = 60;
  double residual_tol = 1e-10;
  double dedup_distance = 1e-6;
};

/**
 * @brief Zeros of the vertical field on the level set H = ½.
 *
 * Sampled seeds are polished by Gauss-Newton (pseudo-inverse steps) in m*
 * coordinates; converged points are deduplicated.
 */
inline std::vector<Eigen::VectorXd> find_fixed_points(const HomogeneousStructure & s, std::size_t samples, std::uint64_t seed = 0,
  const FixedPointOptions & opt = {})
{
  const MomentumSampler sampler(s);
  const Eigen::MatrixXd & lift = s.lift_matrix();
  const Eigen::MatrixXd & mb   = s.m_basis_matrix();
  const auto d                 = static_cast<Eigen::Index>(s.dim_m());
  std::vector<Eigen::VectorXd> found;

  auto residual = [&](const Eigen::VectorXd & p) {
    Eigen::VectorXd r(d + 1);
    r.head(d) = mb.transpose() * vertical_field(s, p);
    r[d]      = hamiltonian_value(s, p) - 0.5;
    return r;
  };

  for (std::size_t i = 0; i < samples; ++i) {
    Eigen::VectorXd y = s.restrict_to_m(sampler(seed, i));
    Eigen::VectorXd r = residual(lift * y);
    for (int it = 0; it < opt.max_iterations && r.cwiseAbs().maxCoeff() >= opt.residual_tol; ++it) {
      const Eigen::VectorXd p = lift * y;
      Eigen::MatrixXd jac(d + 1, d);
      jac.topRows(d) = mb.transpose() * vertical_jacobian(s, p) * lift;
      jac.row(d)     = (dH(s, p).transpose() * lift);
      const Eigen::VectorXd dy = jac.completeOrthogonalDecomposition().solve(-r);
      if (!dy.allFinite()) { break; }
      y += dy;
      r = residual(lift * y);
    }
    if (!(r.cwiseAbs().maxCoeff() < opt.residual_tol)) { continue; }
    const Eigen::VectorXd p = lift * y;
    bool dup                = false;
    for (const auto & q : found) {
      if ((q - p).norm() < opt.dedup_distance) {
        dup = true;
        break;
      }
    }
    if (!dup) { found.push_back(p); }
  }
  return found;
}

struct PhasePortrait
{
  std::vector<Eigen::VectorXd> arrow_points;
  std::vector<Eigen::VectorXd> arrow_directions;
  std::vector<Trajectory> trajectories;
};

/// Vector-field arrows at sampled points of H = ½ plus a few trajectories through further samples.
inline PhasePortrait phase_portrait(const HomogeneousStructure & s, std::size_t arrows, std::size_t curves, std::uint64_t seed, double T,
  double step)
{
  const MomentumSampler sampler(s);
  PhasePortrait pp;
  for (std::size_t i = 0; i < arrows; ++i) {
    const Eigen::VectorXd p = sampler(seed, i);
    pp.arrow_points.push_back(p);
    pp.arrow_directions.push_back(vertical_field(s, p));
  }
  for (std::size_t i = 0; i < curves; ++i) { pp.trajectories.push_back(integrate_vertical(s, sampler(seed, arrows + i), T, step)); }
  return pp;
}

/// Columns kind,id,t,p_1..p_n,dp_1..dp_n; arrows have t = 0, trajectory rows carry the field at each sample.
inline void write_phase_portrait_csv(std::ostream & os, const HomogeneousStructure & s, const PhasePortrait & pp)
{
  char buf[40];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  const auto n = static_cast<Eigen::Index>(s.dim());
  os << "kind,id,t";
  for (Eigen::Index i = 0; i < n; ++i) { os << ",p_" << i + 1; }
  for (Eigen::Index i = 0; i < n; ++i) { os << ",dp_" << i + 1; }
  os << "\n";
  auto row = [&](const char * kind, std::size_t id, double t, const Eigen::VectorXd & p, const Eigen::VectorXd & dp) {
    os << kind << "," << id << "," << num(t);
    for (Eigen::Index i = 0; i < n; ++i) { os << "," << num(p[i]); }
    for (Eigen::Index i = 0; i < n; ++i) { os << "," << num(dp[i]); }
    os << "\n";
  };
  for (std::size_t i = 0; i < pp.arrow_points.size(); ++i) { row("arrow", i, 0.0, pp.arrow_points[i], pp.arrow_directions[i]); }
  for (std::size_t c = 0; c < pp.trajectories.size(); ++c) {
    const auto & tr = pp.trajectories[c];
    for (std::size_t k = 0; k < tr.size(); ++k) { row("trajectory", c, tr.times[k], tr.momenta[k], vertical_field(s, tr.momenta[k])); }
  }
}

}  // namespace hsr
