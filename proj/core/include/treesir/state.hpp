#pragma once

#include <map>
#include <memory>
#include <vector>

#include "treesir/grid.hpp"
#include "treesir/params.hpp"

namespace treesir {

/// Compartment densities at one instant, indexed like the grid.
struct SirState {
  double t = 0.0;
  std::vector<double> S, I, R;
  std::shared_ptr<const RadialGrid> grid;
};

/// Cumulative infected density (time integral of I) plus the constant forcing
/// produced by the initial infected configuration.
struct CumulativeState {
  double t = 0.0;
  std::vector<double> cum;
  std::vector<double> forcing;
  std::shared_ptr<const RadialGrid> grid;
};

/// Initial configuration: susceptibles homogeneously at s0, infected on a
/// finite support given as site -> density in (0,1).
struct InitialCondition {
  double s0 = 0.9;
  std::map<int, double> infected_support;
};

InitialCondition lattice_block_ic(double s0, double i0, int lo, int hi);
InitialCondition tree_root_ic(double s0, double i0);

/// Builds the t = 0 state. Validates that the support lies in the grid
/// interior at least `margin` sites from the truncation boundary and that
/// all initial densities are in (0,1). Throws std::invalid_argument.
SirState make_sir_initial(std::shared_ptr<const RadialGrid> grid,
                          const InitialCondition& ic, int margin = 10);

/// Cumulative field starts identically at zero; the support becomes the forcing.
CumulativeState make_kpp_initial(std::shared_ptr<const RadialGrid> grid,
                                 const InitialCondition& ic, int margin = 10);

}  // namespace treesir
