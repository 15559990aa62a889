#include "treesir/params.hpp"

#include <stdexcept>

#include "treesir/model.hpp"

namespace treesir {

void EpidemicParams::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(s0 > 0.0 && s0 < 1.0)) throw std::invalid_argument("s0 must lie in (0,1)");
  if (k < 1) throw std::invalid_argument("k must be an integer >= 1");
}

DerivedQuantities derived_quantities(const EpidemicParams& p) {
  p.validate();
  DerivedQuantities d;
  d.r0 = p.r0();
  d.istar = endemic_equilibrium(p);
  d.lambda_c = critical_lambda(p);
  if (auto opt = optimal_lambda(p)) {
    d.lambda_0 = opt->lambda0;
    d.max_speed_at_lambda0 = opt->speed;
  }
  d.s_inf = wave_back_susceptibles(p);
  return d;
}

}  // namespace treesir
