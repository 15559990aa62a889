#pragma once

#include <optional>
#include <vector>

#include "treesir/params.hpp"
#include "treesir/state.hpp"

namespace treesir {

enum class Tail { ToZero, ToIstar };
enum class MarchFrom { Above, Below, Both };

struct StationaryOptions {
  double tol = 1e-8;        ///< convergence threshold on sup-norm of the RHS
  MarchFrom from = MarchFrom::Below;
  double t_max = 1e4;       ///< give up (convergence_error) past this time
  double check_every = 1.0; ///< residual / monotonicity check cadence
  double dt = 0.0;          ///< 0 selects dt_max
  int margin = 10;
  int window = 20;          ///< tail classification window length
};

struct StationaryProfile {
  std::vector<double> values;
  double residual = 0.0;          ///< sup-norm of the stationary defect
  Tail tail = Tail::ToZero;
  std::optional<double> tail_rate;  ///< fitted exponential decay, ToZero tails only
  MarchFrom converged_from = MarchFrom::Below;
  bool at_threshold = false;  ///< lambda equals the critical strength; the
                              ///< classification is reported without a tail
                              ///< dichotomy backing it
  double march_time = 0.0;
};

/// Constant level rho with f(rho) + max forcing < 0, used as the starting
/// point of the downward march. Implemented as 1.5 times the root of
/// f(rho) = -max_forcing, with rho > istar when R0 > 1.
double supersolution_level(const InitialCondition& ic, const EpidemicParams& p);

/// Time-marches the cumulative equation from the constant supersolution
/// (Above), from zero (Below), or both, until the sup-norm of the RHS falls
/// below tol. The Above march is checked to be pointwise nonincreasing in
/// time and the Below march nondecreasing (violation beyond 1e-9 throws
/// integrator_error). With MarchFrom::Both the two limits must agree within
/// 10 tol over margin-valid sites; the Below profile is returned.
/// Throws convergence_error when t_max is exhausted.
StationaryProfile solve_stationary(const InitialCondition& ic, const EpidemicParams& p,
                                   std::shared_ptr<const RadialGrid> grid,
                                   const StationaryOptions& opt = {});

/// Tail of a converged profile from the outermost margin-valid window:
/// median above istar/2 is ToIstar, below istar/4 is ToZero with a
/// least-squares decay rate; in between throws invalid_run_error (increase
/// n_shells). Without an endemic scale (R0 <= 1) the split uses the absolute
/// threshold 1e-4. The decay rate is fitted over the outermost window whose
/// values clear `rate_floor`; below that level a residual-converged profile
/// still carries its pre-asymptotic transient and the fit would overstate
/// the rate.
std::pair<Tail, std::optional<double>> classify_tail(const std::vector<double>& values,
                                                     const EpidemicParams& p,
                                                     const RadialGrid& g,
                                                     int margin = 10, int window = 20,
                                                     double rate_floor = 1e-7);

/// Runs both marches; true iff the limits agree within 10 tol in sup-norm
/// over margin-valid sites.
bool sandwich_check(const InitialCondition& ic, const EpidemicParams& p,
                    std::shared_ptr<const RadialGrid> grid,
                    const StationaryOptions& opt = {});

}  // namespace treesir
