#pragma once

#include <optional>

#include "treesir/params.hpp"

namespace treesir {

/// KPP-type nonlinearity f(v) = s0(1 - e^{-tau v}) - eta v.
/// Smooth and concave on [0, inf), vanishes at v = 0.
/// Throws std::domain_error if v < 0.
double nonlinearity(double v, const EpidemicParams& p);

/// f'(0) = eta (R0 - 1).
double nonlinearity_slope_at_zero(const EpidemicParams& p);

/// Unique positive zero of the nonlinearity when R0 > 1, absent otherwise.
/// The returned root satisfies |f(root)| <= 1e-12 * eta.
std::optional<double> endemic_equilibrium(const EpidemicParams& p);

/// Exchange strength above which spreading on the degree-k tree is suppressed:
/// eta (R0 - 1) / (k + 1 - 2 sqrt(k)). Absent for k = 1 or R0 <= 1.
std::optional<double> critical_lambda(const EpidemicParams& p);

struct OptimalLambda {
  double lambda0;  ///< eta (R0 - 1) / ((k - 1) ln k)
  double speed;    ///< eta (R0 - 1) / ln k
};

/// Speed-maximizing exchange strength on the tree. Absent for k = 1 or R0 <= 1.
std::optional<OptimalLambda> optimal_lambda(const EpidemicParams& p);

/// Psi(v) = v - (eta/tau) ln v, defined for v > 0; throws std::domain_error otherwise.
double psi(double v, const EpidemicParams& p);

/// Residual susceptible density behind the wave: the root of
/// Psi(s) = Psi(s0) in (0, eta/tau). Absent when R0 <= 1.
std::optional<double> wave_back_susceptibles(const EpidemicParams& p);

/// Final infected share at a site with cumulative limit `iinf`:
/// s0 (1 - e^{-tau iinf}). Throws std::domain_error if iinf < 0.
double total_infected_limit(double iinf, const EpidemicParams& p);

/// Linearized growth rate of the exponential mode e^{-gamma n}:
///   k = 1:  eta(R0-1) + lambda (e^{-gamma} - 2 + e^{gamma})
///   k >= 2: eta(R0-1) + lambda (e^{gamma} - (k+1) + k e^{-gamma})
/// Throws std::domain_error if gamma <= 0.
double dispersion(double gamma, const EpidemicParams& p);

}  // namespace treesir
