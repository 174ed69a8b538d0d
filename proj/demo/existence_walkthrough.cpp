// Homogeneous geodesics built from the algebra alone, for a few models.

#include <cstdio>
#include <iostream>

#include "hsr/existence.hpp"
#include "hsr/models.hpp"

int main()
{
  for (const char * name : {"heisenberg", "cartan", "so3_kp", "sl2_kp", "so3_generic"}) {
    const auto spec = hsr::load_model(name);
    const auto r    = hsr::construct_homogeneous_geodesic(spec.structure);
    std::cout << name << ": route " << hsr::to_string(r.route) << ", momentum [" << r.momentum.transpose() << "], geodesic vector ["
              << r.geodesic_vector.transpose() << "]";
    if (r.audit.eigen) {
      const auto chk = hsr::verify_eigenconstruction(spec.structure, r);
      std::cout << ", eigenvalue " << r.audit.eigen->eigenvalue << (chk.ok ? " (verified)" : " (NOT verified)");
    }
    std::cout << '\n';
  }
}
