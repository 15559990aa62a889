#include "treesir/wavespeed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "treesir/diagnostics.hpp"
#include "treesir/errors.hpp"
#include "treesir/model.hpp"

namespace treesir {

namespace {

double quotient(double gamma, const EpidemicParams& p) {
  return dispersion(gamma, p) / gamma;
}

struct Bracket {
  double lo, mid, hi;
  int evals;
};

// Walk a doubling (and, if needed, halving) ladder from gamma = 1e-3 until the
// quotient increases on both flanks of some point. The quotient tends to
// +infinity at both ends of (0, inf) whenever the dispersion stays positive,
// so this terminates for every input analytic_speed accepts.
Bracket bracket_minimum(const EpidemicParams& p) {
  int evals = 0;
  auto g = [&](double x) {
    ++evals;
    return quotient(x, p);
  };

  double a = 1e-3;
  double ga = g(a);
  double b = 2.0 * a;
  double gb = g(b);
  while (gb >= ga) {  // minimum sits left of a; walk down
    b = a;
    gb = ga;
    a *= 0.5;
    ga = g(a);
    if (a < 1e-300) throw std::runtime_error("bracket_minimum: ran off the left end");
  }
  double c = 2.0 * b;
  double gc = g(c);
  while (gc <= gb) {  // walk up until the quotient rises again
    a = b;
    ga = gb;
    b = c;
    gb = gc;
    c = 2.0 * c;
    if (c > 700.0) throw std::runtime_error("bracket_minimum: ran off the right end");
    gc = g(c);
  }
  return {a, b, c, evals};
}

}  // namespace

std::optional<SpeedResult> analytic_speed(const EpidemicParams& p) {
  p.validate();
  if (!(p.r0() > 1.0)) return std::nullopt;

  if (p.k >= 2) {
    const double lc = *critical_lambda(p);
    if (p.lambda > lc * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
      return std::nullopt;
    if (std::abs(p.lambda - lc) <= 4.0 * std::numeric_limits<double>::epsilon() * lc) {
      SpeedResult r;
      r.c_star = 0.0;
      r.gamma_star = std::log(std::sqrt(static_cast<double>(p.k)));
      r.method = SpeedResult::Method::Analytic;
      return r;
    }
  }

  Bracket br = bracket_minimum(p);
  double a = br.lo, b = br.hi;
  int evals = br.evals;

  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = quotient(x1, p);
  double f2 = quotient(x2, p);
  evals += 2;
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = quotient(x1, p);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = quotient(x2, p);
    }
    ++evals;
  }
  double gamma = 0.5 * (a + b);

  // Value comparisons cannot localize a smooth minimum beyond sqrt(eps), so
  // polish against the stationarity condition D'(g) g - D(g) = 0, which is
  // strictly increasing in g and changes sign across the minimizer.
  const double aa = p.eta * (p.r0() - 1.0);
  const double kd = p.k == 1 ? 1.0 : static_cast<double>(p.k);
  const double kp1 = p.k == 1 ? 2.0 : p.k + 1.0;
  auto stat = [&](double g) {
    const double eg = std::exp(g);
    const double emg = std::exp(-g);
    const double d = aa + p.lambda * (eg - kp1 + kd * emg);
    const double dprime = p.lambda * (eg - kd * emg);
    return dprime * g - d;
  };
  {
    double lo = gamma, hi = gamma;
    double width = std::max(1e-8, 1e-8 * gamma);
    for (int i = 0; stat(lo) > 0.0; ++i) {
      lo -= (width *= 2.0);
      if (i > 60 || lo <= 0.0) {
        lo = std::min(1e-12, 0.5 * gamma);
        break;
      }
    }
    width = std::max(1e-8, 1e-8 * gamma);
    for (int i = 0; stat(hi) < 0.0 && i <= 60; ++i) hi += (width *= 2.0);
    for (int i = 0; i < 120 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
         ++i) {
      const double mid = 0.5 * (lo + hi);
      (stat(mid) < 0.0 ? lo : hi) = mid;
      ++evals;
    }
    gamma = 0.5 * (lo + hi);
  }

  SpeedResult r;
  r.gamma_star = gamma;
  r.c_star = quotient(r.gamma_star, p);
  r.method = SpeedResult::Method::Analytic;
  r.bracket_lo = br.lo;
  r.bracket_hi = br.hi;
  r.evaluations = evals;
  return r;
}

double lambert_w0(double x) {
  const double branch = -1.0 / std::numbers::e_v<double>;
  if (x < branch - 1e-15) throw std::domain_error("lambert_w0: x below -1/e");
  if (x == 0.0) return 0.0;

  double w;
  if (x < branch + 1e-4) {
    // Series about the branch point, p = sqrt(2(ex + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e_v<double> * x + 1.0)));
    w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
  } else if (x < std::numbers::e_v<double>) {
    w = x / (1.0 + x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int i = 0; i < 100; ++i) {
    const double ew = std::exp(w);
    const double r = w * ew - x;
    if (std::abs(r) <= 0.5e-14 * std::max(1.0, std::abs(x))) break;
    const double denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
    if (denom == 0.0) break;
    w -= r / denom;
    if (w < -1.0) w = -1.0;
  }
  return w;
}

double speed_asymptote(const EpidemicParams& p, SpeedRegime regime) {
  p.validate();
  if (p.k >= 2)
    throw std::invalid_argument("speed_asymptote: defined for the lattice (k = 1) only");
  if (!(p.r0() > 1.0))
    throw std::invalid_argument("speed_asymptote: requires R0 > 1");
  const double a = p.eta * (p.r0() - 1.0);
  if (regime == SpeedRegime::LargeLambda) return 2.0 * std::sqrt(a * p.lambda);
  return a / lambert_w0(a / (std::numbers::e_v<double> * p.lambda));
}

FrontTrace empirical_speed(const std::vector<CumulativeState>& trajectory, double theta,
                           double fit_fraction, int margin) {
  if (trajectory.size() < 20)
    throw std::invalid_argument("empirical_speed: need at least 20 snapshots");
  if (!(theta > 0.0)) throw std::invalid_argument("empirical_speed: theta must be > 0");
  if (!(fit_fraction > 0.0 && fit_fraction <= 1.0))
    throw std::invalid_argument("empirical_speed: fit_fraction must lie in (0,1]");

  const RadialGrid& g = *trajectory.front().grid;

  int support_max = g.min_site();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (trajectory.front().forcing[i] > 0.0) support_max = std::max(support_max, g.site_at(i));

  FrontTrace trace;
  trace.threshold = theta;
  const std::size_t n = trajectory.size();
  const std::size_t first_used = n - static_cast<std::size_t>(std::ceil(fit_fraction * n));

  bool detached = false;
  for (std::size_t s = 0; s < n; ++s) {
    const CumulativeState& snap = trajectory[s];
    const auto pos = front_site(g, snap.cum, theta);
    trace.times.push_back(snap.t);
    trace.positions.push_back(pos ? static_cast<double>(*pos)
                                  : std::numeric_limits<double>::quiet_NaN());
    if (pos && *pos > support_max) detached = true;
    if (s >= first_used && !margin_ok(g, snap.cum, theta, margin)) {
      std::ostringstream msg;
      msg << "margin rule violated at t=" << snap.t << " (front within " << margin
          << " sites of the boundary)";
      throw invalid_run_error(msg.str());
    }
  }

  trace.fit_t_lo = trace.times[first_used];
  trace.fit_t_hi = trace.times.back();

  if (!detached) {
    trace.no_spread = true;
    trace.fitted_speed = 0.0;
    trace.fit_rsq = 0.0;
    return trace;
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t s = first_used; s < n; ++s) {
    if (std::isnan(trace.positions[s])) continue;
    const double x = trace.times[s];
    const double y = trace.positions[s];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw invalid_run_error("empirical_speed: front detected in fewer than 2 used snapshots");

  const double nc = static_cast<double>(count);
  const double slope = (nc * sxy - sx * sy) / (nc * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / nc;

  double ss_res = 0.0;
  const double ybar = sy / nc;
  double ss_tot = 0.0;
  for (std::size_t s = first_used; s < n; ++s) {
    if (std::isnan(trace.positions[s])) continue;
    const double e = trace.positions[s] - (intercept + slope * trace.times[s]);
    ss_res += e * e;
    const double d = trace.positions[s] - ybar;
    ss_tot += d * d;
  }
  trace.fitted_speed = slope;
  trace.fit_rsq = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return trace;
}

double wave_back_check(const std::vector<CumulativeState>& trajectory,
                       const EpidemicParams& p, int margin) {
  if (trajectory.empty()) throw std::invalid_argument("wave_back_check: empty trajectory");
  const CumulativeState& last = trajectory.back();
  const RadialGrid& g = *last.grid;

  const auto istar = endemic_equilibrium(p);
  if (!istar) throw invalid_run_error("wave_back_check: no endemic scale (R0 <= 1)");
  const double theta = *istar / 2.0;

  int support_max = g.min_site();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (last.forcing[i] > 0.0) support_max = std::max(support_max, g.site_at(i));

  const auto pos = front_site(g, last.cum, theta);
  if (!pos || *pos <= support_max)
    throw invalid_run_error("wave_back_check: no established front past the support");
  if (!margin_ok(g, last.cum, theta, margin))
    throw invalid_run_error("wave_back_check: margin rule violated at the final time");

  const std::size_t innermost =
      g.geometry == Geometry::Lattice ? g.index_of(0) : g.index_of(1);
  return p.s0 * std::exp(-p.tau * last.cum[innermost]);
}

}  // namespace treesir
