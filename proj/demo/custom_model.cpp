// Loading a structure from JSON: the Engel algebra with its rank-2 distribution.

#include <iostream>

#include "hsr/go_analysis.hpp"
#include "hsr/json_io.hpp"

int main()
{
  const auto spec = hsr::load_model_file(std::string(DEMO_DIR) + "/engel.json");
  const auto & s  = spec.structure;
  const auto rep  = hsr::validate_structure(s);
  std::cout << spec.name << ": " << (rep.valid() ? "valid" : "invalid") << ", dim " << s.dim() << ", rank " << s.rank() << '\n';

  const auto skew = hsr::carnot_skew_test(s);
  std::cout << "step " << skew.step << ", skew blocks " << (skew.skew_holds() ? "skew" : "not skew") << '\n';

  const auto inv = hsr::invariant_polynomials(s, 2);
  std::cout << inv.polynomials.size() << " invariants up to degree 2 (no isotropy, so every monomial)\n";
  std::cout << hsr::model_to_json(spec).dump(2) << '\n';
}
