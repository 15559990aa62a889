#include "treesir/io.hpp"

#include <algorithm>
#include <cstdio>

#include "treesir/model.hpp"

namespace treesir {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sir_trajectory_csv(std::ostream& os, const std::vector<SirState>& trajectory) {
  os << kSirTrajectoryHeader << '\n';
  for (const SirState& st : trajectory) {
    const RadialGrid& g = *st.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
      os << format_double(st.t) << ',' << g.site_at(i) << ',' << format_double(st.S[i])
         << ',' << format_double(st.I[i]) << ',' << format_double(st.R[i]) << '\n';
    }
  }
}

void write_kpp_trajectory_csv(std::ostream& os,
                              const std::vector<CumulativeState>& trajectory) {
  os << kKppTrajectoryHeader << '\n';
  for (const CumulativeState& st : trajectory) {
    const RadialGrid& g = *st.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
      os << format_double(st.t) << ',' << g.site_at(i) << ','
         << format_double(st.cum[i]) << '\n';
    }
  }
}

void write_stationary_csv(std::ostream& os, const RadialGrid& g,
                          const std::vector<double>& values, const EpidemicParams& p) {
  os << kStationaryHeader << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << g.site_at(i) << ',' << format_double(values[i]) << ','
       << format_double(total_infected_limit(std::max(0.0, values[i]), p)) << '\n';
  }
}

void write_speed_rows_csv(std::ostream& os, const std::vector<SpeedRow>& rows) {
  os << kSpeedSweepHeader << '\n';
  auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const SpeedRow& r : rows) {
    os << r.k << ',' << format_double(r.lambda) << ',' << cell(r.c_analytic) << ','
       << cell(r.gamma_star) << ',' << cell(r.c_empirical) << ',' << cell(r.rsq) << ','
       << r.flag << '\n';
  }
}

}  // namespace treesir
