#include "treesir/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace treesir {

std::vector<double> recover_susceptibles(const CumulativeState& state,
                                         const EpidemicParams& p) {
  std::vector<double> S(state.cum.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    S[i] = p.s0 * std::exp(-p.tau * state.cum[i]);
  return S;
}

double weighted_population(const SirState& state) {
  const RadialGrid& g = *state.grid;
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    total += g.weights[i] * (state.S[i] + state.I[i] + state.R[i]);
  return total;
}

std::vector<double> cumulative_of(const SirState& state, const EpidemicParams& p) {
  std::vector<double> cum(state.R.size());
  for (std::size_t i = 0; i < cum.size(); ++i) cum[i] = state.R[i] / p.eta;
  return cum;
}

std::optional<int> front_site(const RadialGrid& g, const std::vector<double>& values,
                              double theta) {
  for (std::size_t i = g.size(); i-- > 0;) {
    if (values[i] >= theta) return g.site_at(i);
  }
  return std::nullopt;
}

bool margin_ok(const RadialGrid& g, const std::vector<double>& values, double theta,
               int margin) {
  if (g.geometry == Geometry::Lattice) {
    // Two boundaries; check the outermost crossing on each side.
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] >= theta) {
        if (g.site_at(i) < g.min_site() + margin) return false;
        break;
      }
    }
  }
  for (std::size_t i = g.size(); i-- > 0;) {
    if (values[i] >= theta) return g.site_at(i) <= g.max_site() - margin;
  }
  return true;
}

std::pair<std::size_t, std::size_t> margin_interior(const RadialGrid& g, int margin) {
  const auto m = static_cast<std::size_t>(margin);
  if (g.geometry == Geometry::Lattice) {
    if (2 * m >= g.size())
      throw std::invalid_argument("margin_interior: margin swallows the whole grid");
    return {m, g.size() - 1 - m};
  }
  if (m >= g.size())
    throw std::invalid_argument("margin_interior: margin swallows the whole grid");
  return {0, g.size() - 1 - m};
}

}  // namespace treesir
