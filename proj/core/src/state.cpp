#include "treesir/state.hpp"

#include <stdexcept>
#include <string>

namespace treesir {

InitialCondition lattice_block_ic(double s0, double i0, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("lattice_block_ic: empty block");
  InitialCondition ic;
  ic.s0 = s0;
  for (int j = lo; j <= hi; ++j) ic.infected_support[j] = i0;
  return ic;
}

InitialCondition tree_root_ic(double s0, double i0) {
  InitialCondition ic;
  ic.s0 = s0;
  ic.infected_support[1] = i0;
  return ic;
}

namespace {

void validate_support(const RadialGrid& g, const InitialCondition& ic, int margin) {
  if (ic.infected_support.empty())
    throw std::invalid_argument("initial condition: infected support is empty");
  for (const auto& [site, value] : ic.infected_support) {
    if (!(value > 0.0 && value < 1.0))
      throw std::invalid_argument("initial infected density must lie in (0,1) at site " +
                                  std::to_string(site));
    if (site < g.min_site() || site > g.max_site())
      throw std::invalid_argument("initial support site " + std::to_string(site) +
                                  " outside the grid");
    const bool interior =
        g.geometry == Geometry::Lattice
            ? (site >= g.min_site() + margin && site <= g.max_site() - margin)
            : (site <= g.max_site() - margin);
    if (!interior)
      throw std::invalid_argument("initial support site " + std::to_string(site) +
                                  " closer than " + std::to_string(margin) +
                                  " sites to the truncation boundary");
  }
}

}  // namespace

SirState make_sir_initial(std::shared_ptr<const RadialGrid> grid,
                          const InitialCondition& ic, int margin) {
  validate_support(*grid, ic, margin);
  SirState st;
  st.t = 0.0;
  st.S.assign(grid->size(), ic.s0);
  st.I.assign(grid->size(), 0.0);
  st.R.assign(grid->size(), 0.0);
  for (const auto& [site, value] : ic.infected_support)
    st.I[grid->index_of(site)] = value;
  st.grid = std::move(grid);
  return st;
}

CumulativeState make_kpp_initial(std::shared_ptr<const RadialGrid> grid,
                                 const InitialCondition& ic, int margin) {
  validate_support(*grid, ic, margin);
  CumulativeState st;
  st.t = 0.0;
  st.cum.assign(grid->size(), 0.0);
  st.forcing.assign(grid->size(), 0.0);
  for (const auto& [site, value] : ic.infected_support)
    st.forcing[grid->index_of(site)] = value;
  st.grid = std::move(grid);
  return st;
}

}  // namespace treesir
