#pragma once

#include <vector>

#include "treesir/params.hpp"
#include "treesir/state.hpp"

namespace treesir {

/// Largest stable step for the classical RK4 scheme on these dynamics,
/// 0.2 / (eta max(R0,1) + 2 lambda (k+1)). Deliberately conservative.
double dt_max(const EpidemicParams& p);

struct IntegrateOptions {
  double dt = 0.0;             ///< step size; 0 selects dt_max(p)
  double t_end = 0.0;
  double snapshot_every = 1.0; ///< <= 0 records every step
};

/// Fixed-step classical RK4 from state.t to t_end. Steps are shortened to land
/// exactly on snapshot times and on t_end. Snapshots are recorded at the start
/// time, at multiples of snapshot_every, and at t_end.
/// Throws integrator_error if dt exceeds dt_max or if any field becomes
/// non-finite or grows past the divergence bound.
std::vector<SirState> integrate_sir(const SirState& initial, const EpidemicParams& p,
                                    const IntegrateOptions& opt);

std::vector<CumulativeState> integrate_kpp(const CumulativeState& initial,
                                           const EpidemicParams& p,
                                           const IntegrateOptions& opt);

}  // namespace treesir
