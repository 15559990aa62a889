#include "treesir/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "treesir/bisect.hpp"
#include "treesir/errors.hpp"
#include "treesir/integrate.hpp"
#include "treesir/diagnostics.hpp"
#include "treesir/model.hpp"
#include "treesir/rhs.hpp"

namespace treesir {

double supersolution_level(const InitialCondition& ic, const EpidemicParams& p) {
  double max_forcing = 0.0;
  for (const auto& [site, value] : ic.infected_support)
    max_forcing = std::max(max_forcing, value);

  // Root of f(rho) = -max_forcing beyond the hump of f; f(v) <= s0 - eta v
  // guarantees g < 0 at (s0 + max_forcing)/eta + 1.
  const auto g = [&](double v) { return nonlinearity(v, p) + max_forcing; };
  const double istar = endemic_equilibrium(p).value_or(0.0);
  double lo = istar > 0.0 ? istar : 1e-12;
  double hi = (p.s0 + max_forcing) / p.eta + 1.0;
  double rho = 0.0;
  if (g(lo) >= 0.0) {
    rho = 1.5 * bisect(g, lo, hi, 1e-12);
  } else {
    // Degenerate bracket (max_forcing ~ 0 and R0 <= 1); the analytic level works.
    rho = hi;
  }
  if (!(g(rho) < 0.0)) rho = hi;
  return rho;
}

namespace {

struct MarchResult {
  std::vector<double> values;
  double residual;
  double time;
};

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

MarchResult march(const InitialCondition& ic, const EpidemicParams& p,
                  const std::shared_ptr<const RadialGrid>& grid,
                  const StationaryOptions& opt, bool from_above) {
  CumulativeState state = make_kpp_initial(grid, ic, opt.margin);
  if (from_above) {
    const double rho = supersolution_level(ic, p);
    std::fill(state.cum.begin(), state.cum.end(), rho);
  }

  const double step = opt.check_every;
  double residual = sup_abs(kpp_rhs(state, p));
  while (residual >= opt.tol) {
    if (state.t >= opt.t_max) {
      std::ostringstream msg;
      msg << "stationary march did not converge by t=" << opt.t_max
          << " (residual " << residual << ", tol " << opt.tol << ")";
      throw convergence_error(msg.str(), residual);
    }
    IntegrateOptions iopt;
    iopt.dt = opt.dt;
    iopt.t_end = state.t + step;
    iopt.snapshot_every = step;
    std::vector<CumulativeState> block = integrate_kpp(state, p, iopt);
    const CumulativeState& next = block.back();

    for (std::size_t i = 0; i < next.cum.size(); ++i) {
      const double drift = next.cum[i] - state.cum[i];
      if ((from_above && drift > 1e-9) || (!from_above && drift < -1e-9)) {
        std::ostringstream msg;
        msg << "monotone march violated at t=" << next.t << ", site index " << i
            << " (drift " << drift << ")";
        throw integrator_error(msg.str());
      }
    }
    state = next;
    residual = sup_abs(kpp_rhs(state, p));
  }
  return {state.cum, residual, state.t};
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::pair<Tail, std::optional<double>> classify_tail(const std::vector<double>& values,
                                                     const EpidemicParams& p,
                                                     const RadialGrid& g, int margin,
                                                     int window, double rate_floor) {
  const auto [first, last] = margin_interior(g, margin);
  if (last - first + 1 < static_cast<std::size_t>(window))
    throw std::invalid_argument("classify_tail: window does not fit the margin interior");
  const std::size_t w_first = last + 1 - static_cast<std::size_t>(window);

  std::vector<double> tail_values(values.begin() + w_first, values.begin() + last + 1);
  const double med = median_of(tail_values);

  const auto istar = endemic_equilibrium(p);
  if (istar) {
    if (med > *istar / 2.0) return {Tail::ToIstar, std::nullopt};
    if (med >= *istar / 4.0) {
      std::ostringstream msg;
      msg << "ambiguous tail classification (window median " << med << " in [I*/4, I*/2] = ["
          << *istar / 4.0 << ", " << *istar / 2.0 << "]); increase n_shells";
      throw invalid_run_error(msg.str());
    }
  } else if (med > 1e-4) {
    return {Tail::ToIstar, std::nullopt};
  }

  // Fit the decay where the profile has equilibrated: slide the window inward
  // until its outer end clears the floor.
  std::size_t f_last = last;
  while (f_last > first && values[f_last] < rate_floor) --f_last;
  std::size_t f_first = f_last + 1 >= static_cast<std::size_t>(window)
                            ? f_last + 1 - static_cast<std::size_t>(window)
                            : 0;
  f_first = std::max(f_first, first);

  // Least-squares slope of ln(values); decay rate is -slope.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = f_first; i <= f_last; ++i) {
    if (!(values[i] > 0.0)) continue;
    const double x = static_cast<double>(g.site_at(i));
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw invalid_run_error("classify_tail: too few positive sites to fit a decay rate");
  const double denom = count * sxx - sx * sx;
  const double slope = (count * sxy - sx * sy) / denom;
  return {Tail::ToZero, -slope};
}

StationaryProfile solve_stationary(const InitialCondition& ic, const EpidemicParams& p,
                                   std::shared_ptr<const RadialGrid> grid,
                                   const StationaryOptions& opt) {
  p.validate();
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_stationary: tol must be > 0");

  std::optional<MarchResult> above, below;
  if (opt.from == MarchFrom::Above || opt.from == MarchFrom::Both)
    above = march(ic, p, grid, opt, /*from_above=*/true);
  if (opt.from == MarchFrom::Below || opt.from == MarchFrom::Both)
    below = march(ic, p, grid, opt, /*from_above=*/false);

  if (opt.from == MarchFrom::Both) {
    const auto [first, last] = margin_interior(*grid, opt.margin);
    double gap = 0.0;
    for (std::size_t i = first; i <= last; ++i)
      gap = std::max(gap, std::abs(above->values[i] - below->values[i]));
    if (gap > 10.0 * opt.tol) {
      std::ostringstream msg;
      msg << "uniqueness witness failed: marches from above and below disagree by " << gap
          << " (allowed " << 10.0 * opt.tol << ")";
      throw convergence_error(msg.str(), gap);
    }
  }

  const MarchResult& result = below ? *below : *above;
  StationaryProfile profile;
  profile.values = result.values;
  profile.residual = result.residual;
  profile.converged_from = opt.from;
  profile.march_time = result.time;
  auto [tail, rate] = classify_tail(profile.values, p, *grid, opt.margin, opt.window,
                                    std::max(10.0 * opt.tol, 1e-290));
  profile.tail = tail;
  profile.tail_rate = rate;
  if (auto lc = critical_lambda(p))
    profile.at_threshold = std::abs(p.lambda - *lc) <= 1e-9 * std::max(p.lambda, *lc);
  return profile;
}

bool sandwich_check(const InitialCondition& ic, const EpidemicParams& p,
                    std::shared_ptr<const RadialGrid> grid, const StationaryOptions& opt) {
  MarchResult above = march(ic, p, grid, opt, /*from_above=*/true);
  MarchResult below = march(ic, p, grid, opt, /*from_above=*/false);
  const auto [first, last] = margin_interior(*grid, opt.margin);
  double gap = 0.0;
  for (std::size_t i = first; i <= last; ++i)
    gap = std::max(gap, std::abs(above.values[i] - below.values[i]));
  return gap <= 10.0 * opt.tol;
}

}  // namespace treesir
