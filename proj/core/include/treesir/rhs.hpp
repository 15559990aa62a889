#pragma once

#include <vector>

#include "treesir/params.hpp"
#include "treesir/state.hpp"

namespace treesir {

struct SirDeriv {
  std::vector<double> dS, dI, dR;
};

/// Right-hand side of the compartment system:
///   S' = -tau S I,  I' = tau S I - eta I + lambda * exchange(I),  R' = eta I.
/// Exchange stencils: lattice I_{j-1} - 2 I_j + I_{j+1}; tree interior
/// I_{n-1} - (k+1) I_n + k I_{n+1}; tree root (k+1)(I_2 - I_1). The value one
/// past the truncation boundary is taken equal to the boundary value.
/// Throws std::invalid_argument on dimension mismatch.
SirDeriv sir_rhs(const SirState& state, const EpidemicParams& p);

/// Right-hand side of the cumulative equation:
///   cum' = f(cum) + forcing + lambda * exchange(cum),
/// with the same boundary rule.
std::vector<double> kpp_rhs(const CumulativeState& state, const EpidemicParams& p);

/// Allocation-free cores used by the integrator. `y` packs [S | I | R].
void sir_rhs_flat(const RadialGrid& g, const EpidemicParams& p, const double* y, double* dy);
void kpp_rhs_into(const RadialGrid& g, const EpidemicParams& p,
                  const std::vector<double>& forcing, const double* cum, double* dcum);

}  // namespace treesir
