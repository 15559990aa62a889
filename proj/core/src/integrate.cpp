#include "treesir/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "treesir/errors.hpp"
#include "treesir/rhs.hpp"

namespace treesir {

double dt_max(const EpidemicParams& p) {
  return 0.2 / (p.eta * std::max(p.r0(), 1.0) + 2.0 * p.lambda * (p.k + 1.0));
}

namespace {

class Rk4Stepper {
public:
  explicit Rk4Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  // The dynamics are autonomous, so the stage times never enter the stages.
  template <class Rhs>
  void step(Rhs&& rhs, double dt, std::vector<double>& y) {
    const std::size_t n = y.size();
    rhs(y.data(), k1_.data());
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    rhs(tmp_.data(), k2_.data());
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    rhs(tmp_.data(), k3_.data());
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    rhs(tmp_.data(), k4_.data());
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
      y[i] += w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

void check_finite(const std::vector<double>& y, double bound, double t) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || std::abs(y[i]) > bound) {
      std::ostringstream msg;
      msg << "integration diverged at t=" << t << ", component " << i << " = " << y[i]
          << " (bound " << bound << ")";
      throw integrator_error(msg.str());
    }
  }
}

// Snapshot times: t0, every multiple of snapshot_every inside (t0, t_end), t_end.
std::vector<double> snapshot_times(double t0, double t_end, double every) {
  std::vector<double> ts;
  if (every > 0.0) {
    long m = static_cast<long>(std::floor(t0 / every)) + 1;
    for (; m * every < t_end - 1e-12 * std::max(1.0, t_end); ++m) {
      if (m * every > t0 + 1e-12 * std::max(1.0, std::abs(t0))) ts.push_back(m * every);
    }
  }
  ts.push_back(t_end);
  return ts;
}

template <class Rhs, class Emit>
void rk4_drive(Rhs rhs, std::vector<double>& y, double t0, const EpidemicParams& p,
               const IntegrateOptions& opt, Emit emit) {
  if (!(opt.t_end > t0)) throw std::invalid_argument("integrate: t_end must exceed start time");
  const double cap = dt_max(p);
  const double dt = opt.dt > 0.0 ? opt.dt : cap;
  if (dt > cap * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt " << dt << " exceeds the stability bound " << cap;
    throw integrator_error(msg.str());
  }

  double bound = 10.0;
  for (double v : y) bound = std::max(bound, 2.0 * std::abs(v));

  Rk4Stepper stepper(y.size());
  emit(t0, y);

  double t = t0;
  const double every = opt.snapshot_every > 0.0 ? opt.snapshot_every : dt;
  for (double target : snapshot_times(t0, opt.t_end, every)) {
    while (t < target - 1e-12 * std::max(1.0, target)) {
      const double h = std::min(dt, target - t);
      stepper.step(rhs, h, y);
      t += h;
      check_finite(y, bound, t);
    }
    t = target;
    emit(t, y);
  }
}

}  // namespace

std::vector<SirState> integrate_sir(const SirState& initial, const EpidemicParams& p,
                                    const IntegrateOptions& opt) {
  const RadialGrid& g = *initial.grid;
  const std::size_t n = g.size();
  std::vector<double> y(3 * n);
  std::copy(initial.S.begin(), initial.S.end(), y.begin());
  std::copy(initial.I.begin(), initial.I.end(), y.begin() + n);
  std::copy(initial.R.begin(), initial.R.end(), y.begin() + 2 * n);

  std::vector<SirState> out;
  auto emit = [&](double t, const std::vector<double>& yy) {
    SirState st;
    st.t = t;
    st.S.assign(yy.begin(), yy.begin() + n);
    st.I.assign(yy.begin() + n, yy.begin() + 2 * n);
    st.R.assign(yy.begin() + 2 * n, yy.end());
    st.grid = initial.grid;
    out.push_back(std::move(st));
  };
  auto rhs = [&](const double* yy, double* dy) { sir_rhs_flat(g, p, yy, dy); };
  rk4_drive(rhs, y, initial.t, p, opt, emit);
  return out;
}

std::vector<CumulativeState> integrate_kpp(const CumulativeState& initial,
                                           const EpidemicParams& p,
                                           const IntegrateOptions& opt) {
  const RadialGrid& g = *initial.grid;
  std::vector<double> y = initial.cum;

  std::vector<CumulativeState> out;
  auto emit = [&](double t, const std::vector<double>& yy) {
    CumulativeState st;
    st.t = t;
    st.cum = yy;
    st.forcing = initial.forcing;
    st.grid = initial.grid;
    out.push_back(std::move(st));
  };
  auto rhs = [&](const double* yy, double* dy) {
    kpp_rhs_into(g, p, initial.forcing, yy, dy);
  };
  rk4_drive(rhs, y, initial.t, p, opt, emit);
  return out;
}

}  // namespace treesir
