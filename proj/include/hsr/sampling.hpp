#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "hsr/structure.hpp"

namespace hsr {

/// splitmix64 finaliser applied to (seed, index); one independent stream per sample.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index)
{
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z               = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z               = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * @brief Draws covectors p in the annihilator of k with H(p) = ½.
 *
 * Values on the distribution basis are L·u with B = L Lᵀ and u uniform on the
 * unit sphere; values on a coordinate complement of the distribution inside m
 * are standard normal; values on k are zero.
 */
class MomentumSampler
{
public:
  explicit MomentumSampler(const HomogeneousStructure & s) : s_(&s)
  {
    const std::size_t n = s.dim();
    std::vector<QVector> dm;
    for (const auto & d : s.distribution().basis()) { dm.push_back(s.m_coordinates(d)); }
    const auto extra = Subspace::from_basis(dm, s.dim_m()).coordinate_complement();
    std::vector<QVector> cols = s.distribution().basis();
    for (const auto & e : extra) {
      QVector v = zero_qvector(n);
      for (std::size_t i = 0; i < s.dim_m(); ++i) {
        for (std::size_t a = 0; a < n; ++a) { v[a] += e[i] * s.complement().basis()[i][a]; }
      }
      cols.push_back(v);
    }
    fill_ = extra.size();
    cols.insert(cols.end(), s.isotropy().basis().begin(), s.isotropy().basis().end());
    // p = T^{-T} [q; c; 0]
    dual_ = inverse(QMatrix::from_columns(cols, n)).transpose().to_eigen();
  }

  Eigen::VectorXd operator()(std::uint64_t seed, std::uint64_t index) const
  {
    std::mt19937_64 rng(sample_seed(seed, index));
    std::normal_distribution<double> n01(0.0, 1.0);
    const auto r = static_cast<Eigen::Index>(s_->rank());
    Eigen::VectorXd u(r);
    do {
      for (Eigen::Index i = 0; i < r; ++i) { u[i] = n01(rng); }
    } while (u.norm() < 1e-12);
    u.normalize();
    Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s_->dim()));
    values.head(r) = s_->metric_sqrt() * u;
    for (std::size_t i = 0; i < fill_; ++i) { values[r + static_cast<Eigen::Index>(i)] = n01(rng); }
    return dual_ * values;
  }

private:
  const HomogeneousStructure * s_;
  std::size_t fill_{0};
  Eigen::MatrixXd dual_;
};

}  // namespace hsr
