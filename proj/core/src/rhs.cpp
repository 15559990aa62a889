#include "treesir/rhs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treesir {

namespace {

// Raw nonlinearity without the domain guard: integration states may carry
// roundoff-level negative values.
inline double f_raw(double v, const EpidemicParams& p) {
  return -p.s0 * std::expm1(-p.tau * v) - p.eta * v;
}

// Exchange stencil applied to an arbitrary field, ghost value past the
// boundary equal to the boundary value.
inline void exchange_into(const RadialGrid& g, const EpidemicParams& p,
                          const double* v, double* out) {
  const std::size_t n = g.size();
  const double lam = p.lambda;
  if (g.geometry == Geometry::Lattice) {
    out[0] = lam * (v[1] - v[0]);
    for (std::size_t i = 1; i + 1 < n; ++i)
      out[i] = lam * (v[i - 1] - 2.0 * v[i] + v[i + 1]);
    out[n - 1] = lam * (v[n - 2] - v[n - 1]);
  } else {
    const double kd = static_cast<double>(g.k);
    out[0] = lam * (kd + 1.0) * (v[1] - v[0]);
    for (std::size_t i = 1; i + 1 < n; ++i)
      out[i] = lam * (v[i - 1] - (kd + 1.0) * v[i] + kd * v[i + 1]);
    out[n - 1] = lam * (v[n - 2] - v[n - 1]);
  }
}

}  // namespace

void sir_rhs_flat(const RadialGrid& g, const EpidemicParams& p, const double* y,
                  double* dy) {
  const std::size_t n = g.size();
  const double* S = y;
  const double* I = y + n;
  double* dS = dy;
  double* dI = dy + n;
  double* dR = dy + 2 * n;

  exchange_into(g, p, I, dI);
  for (std::size_t i = 0; i < n; ++i) {
    const double infection = p.tau * S[i] * I[i];
    const double removal = p.eta * I[i];
    dS[i] = -infection;
    dI[i] += infection - removal;
    dR[i] = removal;
  }
}

void kpp_rhs_into(const RadialGrid& g, const EpidemicParams& p,
                  const std::vector<double>& forcing, const double* cum,
                  double* dcum) {
  const std::size_t n = g.size();
  exchange_into(g, p, cum, dcum);
  for (std::size_t i = 0; i < n; ++i)
    dcum[i] += f_raw(cum[i], p) + forcing[i];
}

SirDeriv sir_rhs(const SirState& state, const EpidemicParams& p) {
  const RadialGrid& g = *state.grid;
  const std::size_t n = g.size();
  if (state.S.size() != n || state.I.size() != n || state.R.size() != n)
    throw std::invalid_argument("sir_rhs: field sizes do not match the grid");
  if (p.k != g.k) throw std::invalid_argument("sir_rhs: params k does not match the grid");

  std::vector<double> y(3 * n), dy(3 * n);
  std::copy(state.S.begin(), state.S.end(), y.begin());
  std::copy(state.I.begin(), state.I.end(), y.begin() + n);
  std::copy(state.R.begin(), state.R.end(), y.begin() + 2 * n);
  sir_rhs_flat(g, p, y.data(), dy.data());

  SirDeriv d;
  d.dS.assign(dy.begin(), dy.begin() + n);
  d.dI.assign(dy.begin() + n, dy.begin() + 2 * n);
  d.dR.assign(dy.begin() + 2 * n, dy.end());
  return d;
}

std::vector<double> kpp_rhs(const CumulativeState& state, const EpidemicParams& p) {
  const RadialGrid& g = *state.grid;
  if (state.cum.size() != g.size() || state.forcing.size() != g.size())
    throw std::invalid_argument("kpp_rhs: field sizes do not match the grid");
  if (p.k != g.k) throw std::invalid_argument("kpp_rhs: params k does not match the grid");
  std::vector<double> dcum(g.size());
  kpp_rhs_into(g, p, state.forcing, state.cum.data(), dcum.data());
  return dcum;
}

}  // namespace treesir
