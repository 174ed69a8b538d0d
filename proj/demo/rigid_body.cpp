// Axisymmetric rigid body on so(3): integrate the momentum equation, compare with
// the rotating closed form, and print a few samples.

#include <cstdio>

#include "hsr/integrator.hpp"
#include "hsr/models.hpp"

int main()
{
  const auto spec = hsr::load_model("so3_axisym");
  const auto & s  = spec.structure;

  Eigen::VectorXd p0(4);
  p0 << 0.8, 0.0, 0.6, 0.0;
  const auto tr = hsr::integrate_vertical(s, p0, 10.0, 1e-3, spec.casimirs);

  std::printf("   t        p1        p2        p3    closed-form gap\n");
  for (std::size_t k = 0; k < tr.size(); k += 2000) {
    const Eigen::VectorXd exact = hsr::closed_form_axisymmetric(s, *spec.axis, p0, tr.times[k], *spec.kappa);
    const auto & p              = tr.momenta[k];
    std::printf("%5.1f %9.5f %9.5f %9.5f   %.2e\n", tr.times[k], p[0], p[1], p[2], (p - exact).norm());
  }
  std::printf("energy drift %.2e, Casimir drift %.2e\n", tr.max_energy_drift(), tr.max_casimir_drift().at(0));
}
