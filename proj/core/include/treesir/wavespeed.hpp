#pragma once

#include <optional>
#include <vector>

#include "treesir/params.hpp"
#include "treesir/state.hpp"

namespace treesir {

struct SpeedResult {
  double c_star = 0.0;      ///< sites per unit time
  double gamma_star = 0.0;  ///< per-site decay of the selected mode
  enum class Method { Analytic, Empirical } method = Method::Analytic;
  double bracket_lo = 0.0, bracket_hi = 0.0;  ///< search diagnostics
  int evaluations = 0;
};

/// Spreading speed min_{gamma>0} dispersion(gamma)/gamma by golden-section
/// search on a doubling bracket, tolerance 1e-10 in gamma. Absent when
/// R0 <= 1, or when k >= 2 and lambda > lambda_c. At lambda = lambda_c the
/// closed form (0, ln sqrt k) is returned.
std::optional<SpeedResult> analytic_speed(const EpidemicParams& p);

/// Principal branch of the Lambert W function: w e^w = x for x >= -1/e,
/// w >= -1. Halley iteration; residual |w e^w - x| <= 1e-14 max(1,|x|).
/// Throws std::domain_error below -1/e.
double lambert_w0(double x);

enum class SpeedRegime { SmallLambda, LargeLambda };

/// Closed-form lattice speed asymptotes (k = 1 only, R0 > 1):
///   SmallLambda: a / W0(a / (e lambda)) with a = eta (R0-1), the exact
///                minimizer of the one-sided minimand (a + lambda e^g)/g;
///   LargeLambda: 2 sqrt(a lambda), the continuum speed.
/// Throws std::invalid_argument for k >= 2.
double speed_asymptote(const EpidemicParams& p, SpeedRegime regime);

struct FrontTrace {
  std::vector<double> times;
  std::vector<double> positions;  ///< front site per snapshot; NaN before detection
  double threshold = 0.0;
  double fitted_speed = 0.0;
  double fit_rsq = 0.0;
  double fit_t_lo = 0.0, fit_t_hi = 0.0;
  bool no_spread = false;  ///< front never detached from the forcing support
};

/// Tracks the level set max{ n : cum_n(t) >= theta } over a trajectory,
/// discards the first (1 - fit_fraction) snapshots as transient and fits an
/// ordinary least-squares line through (t, position). Requires >= 20
/// snapshots; each used snapshot must satisfy the margin rule
/// (invalid_run_error otherwise).
FrontTrace empirical_speed(const std::vector<CumulativeState>& trajectory, double theta,
                           double fit_fraction = 0.5, int margin = 10);

/// Susceptible density at the innermost site at the final snapshot, via the
/// cumulative field. Requires an established front past the forcing support
/// (invalid_run_error otherwise). Converges to the wave-back density s_inf.
double wave_back_check(const std::vector<CumulativeState>& trajectory,
                       const EpidemicParams& p, int margin = 10);

}  // namespace treesir
