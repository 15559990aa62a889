#pragma once

#include <optional>
#include <vector>

#include "treesir/params.hpp"
#include "treesir/state.hpp"

namespace treesir {

/// S_n = s0 e^{-tau cum_n}, per site.
std::vector<double> recover_susceptibles(const CumulativeState& state,
                                         const EpidemicParams& p);

/// Sum over sites of w_n (S_n + I_n + R_n). Conserved exactly by the
/// dynamics on the truncated grid (the weighted exchange fluxes telescope).
double weighted_population(const SirState& state);

/// Cumulative field implied by an SIR state via R = eta * integral of I.
std::vector<double> cumulative_of(const SirState& state, const EpidemicParams& p);

/// Outermost site whose value is >= theta; absent when no site qualifies.
/// On the lattice this is the right-moving front, max{ j : v_j >= theta }.
std::optional<int> front_site(const RadialGrid& g, const std::vector<double>& values,
                              double theta);

/// Front stays at least `margin` sites away from every truncation boundary.
/// Vacuously true when the field is everywhere below theta.
bool margin_ok(const RadialGrid& g, const std::vector<double>& values, double theta,
               int margin);

/// Index range [first, last] of sites at least `margin` sites from the
/// truncation boundary (both boundaries on the lattice; the root side of the
/// tree is not truncated).
std::pair<std::size_t, std::size_t> margin_interior(const RadialGrid& g, int margin);

}  // namespace treesir
