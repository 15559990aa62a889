#pragma once

#include <optional>

namespace treesir {

/// Model constants. Rates are in reciprocal abstract time units.
struct EpidemicParams {
  double tau = 2.0;     ///< contact rate (1/time)
  double eta = 1.0;     ///< removal rate (1/time)
  double lambda = 1.0;  ///< exchange strength (1/time)
  double s0 = 0.9;      ///< initial susceptible density, in (0,1)
  int k = 1;            ///< tree degree; k=1 is the integer lattice

  double r0() const { return s0 * tau / eta; }

  /// Throws std::invalid_argument unless tau, eta, lambda > 0, 0 < s0 < 1, k >= 1.
  void validate() const;
};

/// Closed-form quantities derived from the model constants. Optional fields
/// are absent (not sentinel values) when the defining condition fails.
struct DerivedQuantities {
  double r0 = 0.0;
  std::optional<double> istar;                 ///< endemic root of the nonlinearity, present iff r0 > 1
  std::optional<double> lambda_c;              ///< spreading threshold, present iff k >= 2 and r0 > 1
  std::optional<double> lambda_0;              ///< speed-maximizing exchange strength, same presence
  std::optional<double> max_speed_at_lambda0;  ///< speed at lambda_0, same presence
  std::optional<double> s_inf;                 ///< wave-back susceptible density, present iff r0 > 1
};

DerivedQuantities derived_quantities(const EpidemicParams& p);

}  // namespace treesir
