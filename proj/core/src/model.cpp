#include "treesir/model.hpp"

#include <cmath>
#include <stdexcept>

#include "treesir/bisect.hpp"

namespace treesir {

double nonlinearity(double v, const EpidemicParams& p) {
  if (v < 0.0) throw std::domain_error("nonlinearity: v must be >= 0");
  return -p.s0 * std::expm1(-p.tau * v) - p.eta * v;
}

double nonlinearity_slope_at_zero(const EpidemicParams& p) {
  return p.s0 * p.tau - p.eta;
}

std::optional<double> endemic_equilibrium(const EpidemicParams& p) {
  if (!(p.r0() > 1.0)) return std::nullopt;
  const auto f = [&p](double v) { return nonlinearity(v, p); };
  // f > 0 just right of 0 and f(v) <= s0 - eta v, so the root is bracketed
  // once f turns negative; start the upper end at R0 + 1 and expand if needed.
  const double lo = 1e-12;
  double hi = p.r0() + 1.0;
  if (f(hi) >= 0.0) hi = expand_bracket_up(f, lo, hi);
  return bisect(f, lo, hi, 0.0);
}

std::optional<double> critical_lambda(const EpidemicParams& p) {
  if (p.k < 2 || !(p.r0() > 1.0)) return std::nullopt;
  const double kd = static_cast<double>(p.k);
  return p.eta * (p.r0() - 1.0) / (kd + 1.0 - 2.0 * std::sqrt(kd));
}

std::optional<OptimalLambda> optimal_lambda(const EpidemicParams& p) {
  if (p.k < 2 || !(p.r0() > 1.0)) return std::nullopt;
  const double a = p.eta * (p.r0() - 1.0);
  const double lnk = std::log(static_cast<double>(p.k));
  return OptimalLambda{a / ((p.k - 1) * lnk), a / lnk};
}

double psi(double v, const EpidemicParams& p) {
  if (!(v > 0.0)) throw std::domain_error("psi: v must be > 0");
  return v - (p.eta / p.tau) * std::log(v);
}

std::optional<double> wave_back_susceptibles(const EpidemicParams& p) {
  if (!(p.r0() > 1.0)) return std::nullopt;
  const double target = psi(p.s0, p);
  const double vmin = p.eta / p.tau;  // global minimum of psi
  const auto g = [&](double v) { return psi(v, p) - target; };
  // psi blows up as v -> 0+, so shrink the lower end until g > 0 there.
  double lo = vmin;
  do {
    lo *= 1e-3;
  } while (g(lo) <= 0.0 && lo > 1e-300);
  return bisect(g, lo, vmin, 0.0);
}

double total_infected_limit(double iinf, const EpidemicParams& p) {
  if (iinf < 0.0) throw std::domain_error("total_infected_limit: iinf must be >= 0");
  return -p.s0 * std::expm1(-p.tau * iinf);
}

double dispersion(double gamma, const EpidemicParams& p) {
  if (!(gamma > 0.0)) throw std::domain_error("dispersion: gamma must be > 0");
  const double a = p.eta * (p.r0() - 1.0);
  const double eg = std::exp(gamma);
  const double emg = std::exp(-gamma);
  if (p.k == 1) return a + p.lambda * (emg - 2.0 + eg);
  return a + p.lambda * (eg - (p.k + 1.0) + p.k * emg);
}

}  // namespace treesir
