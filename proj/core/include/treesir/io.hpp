#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "treesir/params.hpp"
#include "treesir/state.hpp"

namespace treesir {

inline constexpr const char* kSirTrajectoryHeader = "t,site,S,I,R";
inline constexpr const char* kKppTrajectoryHeader = "t,site,cumI";
inline constexpr const char* kStationaryHeader = "site,cumI_inf,Itot";
inline constexpr const char* kSpeedSweepHeader = "k,lambda,c_analytic,gamma_star,c_empirical,rsq,flag";

/// Shortest representation that round-trips a double (17 significant digits).
std::string format_double(double v);

void write_sir_trajectory_csv(std::ostream& os, const std::vector<SirState>& trajectory);
void write_kpp_trajectory_csv(std::ostream& os, const std::vector<CumulativeState>& trajectory);

/// One row per site: the converged cumulative value and the implied final
/// infected share.
void write_stationary_csv(std::ostream& os, const RadialGrid& g,
                          const std::vector<double>& values, const EpidemicParams& p);

struct SpeedRow {
  int k = 0;
  double lambda = 0.0;
  std::optional<double> c_analytic;
  std::optional<double> gamma_star;
  std::optional<double> c_empirical;
  std::optional<double> rsq;
  std::string flag;  ///< empty, "no_spread", or "invalid_run"
};

void write_speed_rows_csv(std::ostream& os, const std::vector<SpeedRow>& rows);

}  // namespace treesir
