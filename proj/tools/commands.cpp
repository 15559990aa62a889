#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "treesir/diagnostics.hpp"
#include "treesir/errors.hpp"
#include "treesir/integrate.hpp"
#include "treesir/io.hpp"
#include "treesir/model.hpp"
#include "treesir/rhs.hpp"
#include "treesir/stationary.hpp"
#include "treesir/version.hpp"
#include "treesir/wavespeed.hpp"

namespace treesir::cli {

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw config_error("cannot write output file '" + path + "'");
  f << content;
}

void write_manifest(const RunConfig& cfg, const std::string& command) {
  json manifest{{"version", kVersion}, {"command", command}, {"config", config_to_json(cfg)}};
  write_file(cfg.out + "manifest.json", manifest.dump(2) + "\n");
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

StationaryOptions stationary_options(const RunConfig& cfg) {
  StationaryOptions opt;
  opt.tol = cfg.tol;
  opt.from = cfg.from;
  opt.t_max = cfg.t_max;
  opt.dt = cfg.dt;
  opt.margin = cfg.margin;
  opt.window = cfg.window;
  return opt;
}

double front_threshold(const RunConfig& cfg) {
  const auto istar = endemic_equilibrium(cfg.params);
  return istar ? cfg.theta_frac * *istar : 1e-4;
}

std::vector<CumulativeState> run_kpp(const RunConfig& cfg) {
  auto grid = std::make_shared<const RadialGrid>(build_grid(cfg.params.k, cfg.n_shells));
  CumulativeState init = make_kpp_initial(grid, cfg.initial_condition(), cfg.margin);
  IntegrateOptions iopt{cfg.dt, cfg.t_end, cfg.snapshot_every};
  return integrate_kpp(init, cfg.params, iopt);
}

}  // namespace

int cmd_derive(const RunConfig& cfg, std::ostream& out) {
  const DerivedQuantities d = derived_quantities(cfg.params);
  const auto speed = analytic_speed(cfg.params);

  if (cfg.format == "csv") {
    auto cell = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string();
    };
    out << "r0,istar,lambda_c,lambda_0,max_speed_at_lambda0,s_inf,c_star,gamma_star\n"
        << format_double(d.r0) << ',' << cell(d.istar) << ',' << cell(d.lambda_c) << ','
        << cell(d.lambda_0) << ',' << cell(d.max_speed_at_lambda0) << ',' << cell(d.s_inf)
        << ',' << cell(speed ? std::optional<double>(speed->c_star) : std::nullopt) << ','
        << cell(speed ? std::optional<double>(speed->gamma_star) : std::nullopt) << '\n';
    return 0;
  }

  json report{{"r0", d.r0},
              {"istar", optional_json(d.istar)},
              {"lambda_c", optional_json(d.lambda_c)},
              {"lambda_0", optional_json(d.lambda_0)},
              {"max_speed_at_lambda0", optional_json(d.max_speed_at_lambda0)},
              {"s_inf", optional_json(d.s_inf)},
              {"c_star", speed ? json(speed->c_star) : json(nullptr)},
              {"gamma_star", speed ? json(speed->gamma_star) : json(nullptr)}};
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  auto grid = std::make_shared<const RadialGrid>(build_grid(cfg.params.k, cfg.n_shells));
  const InitialCondition ic = cfg.initial_condition();
  IntegrateOptions iopt{cfg.dt, cfg.t_end, cfg.snapshot_every};

  std::ostringstream csv;
  bool margin_valid = true;
  const double theta = front_threshold(cfg);
  if (cfg.model == ModelKind::Sir) {
    const SirState init = make_sir_initial(grid, ic, cfg.margin);
    const auto traj = integrate_sir(init, cfg.params, iopt);
    write_sir_trajectory_csv(csv, traj);
    for (const SirState& st : traj)
      margin_valid = margin_valid &&
                     margin_ok(*grid, cumulative_of(st, cfg.params), theta, cfg.margin);
  } else {
    const CumulativeState init = make_kpp_initial(grid, ic, cfg.margin);
    const auto traj = integrate_kpp(init, cfg.params, iopt);
    write_kpp_trajectory_csv(csv, traj);
    for (const CumulativeState& st : traj)
      margin_valid = margin_valid && margin_ok(*grid, st.cum, theta, cfg.margin);
  }
  write_file(cfg.out + "trajectory.csv", csv.str());
  write_manifest(cfg, "simulate");
  out << "wrote " << cfg.out << "trajectory.csv (margin_valid="
      << (margin_valid ? "true" : "false") << ")\n";
  return 0;
}

int cmd_stationary(const RunConfig& cfg, std::ostream& out) {
  auto grid = std::make_shared<const RadialGrid>(build_grid(cfg.params.k, cfg.n_shells));
  const StationaryProfile profile =
      solve_stationary(cfg.initial_condition(), cfg.params, grid, stationary_options(cfg));

  std::ostringstream csv;
  write_stationary_csv(csv, *grid, profile.values, cfg.params);
  write_file(cfg.out + "stationary.csv", csv.str());

  json summary{{"tail", profile.tail == Tail::ToIstar ? "to_istar" : "to_zero"},
               {"tail_rate", optional_json(profile.tail_rate)},
               {"residual", profile.residual},
               {"march_time", profile.march_time},
               {"at_threshold", profile.at_threshold}};
  write_file(cfg.out + "stationary.json", summary.dump(2) + "\n");
  write_manifest(cfg, "stationary");
  out << summary.dump(2) << '\n';
  return 0;
}

namespace {

SpeedRow speed_row_for(const RunConfig& cfg, const EpidemicParams& p) {
  SpeedRow row;
  row.k = p.k;
  row.lambda = p.lambda;
  if (const auto speed = analytic_speed(p)) {
    row.c_analytic = speed->c_star;
    row.gamma_star = speed->gamma_star;
  }
  if (cfg.empirical) {
    RunConfig point = cfg;
    point.params = p;
    try {
      const auto traj = run_kpp(point);
      const FrontTrace trace =
          empirical_speed(traj, front_threshold(point), cfg.fit_fraction, cfg.margin);
      if (trace.no_spread) {
        row.flag = "no_spread";
        row.c_empirical = 0.0;
        row.rsq = trace.fit_rsq;
      } else {
        row.c_empirical = trace.fitted_speed;
        row.rsq = trace.fit_rsq;
      }
    } catch (const invalid_run_error&) {
      row.flag = "invalid_run";
    }
  }
  return row;
}

}  // namespace

int cmd_speed(const RunConfig& cfg, std::ostream& out) {
  const SpeedRow row = speed_row_for(cfg, cfg.params);
  std::ostringstream csv;
  write_speed_rows_csv(csv, {row});
  write_file(cfg.out + "speed.csv", csv.str());
  write_manifest(cfg, "speed");
  out << csv.str();
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const std::vector<int> ks = cfg.parse_k_list();
  std::vector<EpidemicParams> points;
  for (int k : ks) {
    for (int i = 0; i < cfg.sweep_count; ++i) {
      EpidemicParams p = cfg.params;
      p.k = k;
      p.lambda = cfg.sweep_count == 1
                     ? cfg.sweep_lo
                     : cfg.sweep_lo + (cfg.sweep_hi - cfg.sweep_lo) * i /
                                          static_cast<double>(cfg.sweep_count - 1);
      points.push_back(p);
    }
  }

  std::vector<SpeedRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
      rows[i] = speed_row_for(cfg, points[i]);
  };
  const int nworkers = std::min<int>(cfg.workers, static_cast<int>(points.size()));
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream csv;
  write_speed_rows_csv(csv, rows);
  write_file(cfg.out + "sweep.csv", csv.str());
  write_manifest(cfg, "sweep");
  out << "wrote " << cfg.out << "sweep.csv (" << rows.size() << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// check: executable invariant battery at desk scale
// ---------------------------------------------------------------------------

namespace {

struct CheckResult {
  std::string name;
  bool pass;
  double measured;
  std::string detail;
};

class CheckRunner {
public:
  void record(const std::string& name, bool pass, double measured,
              const std::string& detail = "") {
    results_.push_back({name, pass, measured, detail});
  }
  const std::vector<CheckResult>& results() const { return results_; }
  bool all_pass() const {
    for (const auto& r : results_)
      if (!r.pass) return false;
    return true;
  }

private:
  std::vector<CheckResult> results_;
};

void check_core_model(CheckRunner& cr, const EpidemicParams& p) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // concavity of the nonlinearity over random triples
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double a = 3.0 * unif(rng);
    const double b = a + 3.0 * unif(rng) + 1e-6;
    const double th = unif(rng);
    const double lhs = nonlinearity(th * a + (1.0 - th) * b, p);
    const double rhs = th * nonlinearity(a, p) + (1.0 - th) * nonlinearity(b, p);
    worst = std::min(worst, lhs - rhs);
  }
  cr.record("nonlinearity_concave", worst >= -1e-12, worst);

  // psi decreases left of eta/tau and increases right of it
  const double vmin = p.eta / p.tau;
  bool psi_ok = true;
  for (int i = 1; i <= 50; ++i) {
    const double vl = vmin * i / 51.0;
    const double vr = vmin * (1.0 + i);
    psi_ok = psi_ok && psi(vl, p) > psi(vl + vmin / 200.0, p);
    psi_ok = psi_ok && psi(vr + vmin / 200.0, p) > psi(vr, p);
  }
  cr.record("psi_monotone_split", psi_ok, vmin);

  // three routes to the endemic level agree
  const auto istar = endemic_equilibrium(p);
  const auto sinf = wave_back_susceptibles(p);
  if (istar && sinf) {
    const double via_flux = (p.s0 - *sinf) / p.eta;
    const double via_log = std::log(p.s0 / *sinf) / p.tau;
    const double gap = std::max(std::abs(*istar - via_flux), std::abs(*istar - via_log));
    cr.record("endemic_three_routes", gap <= 1e-9, gap);
  }

  // dispersion is convex with its minimum at ln sqrt(k), and the sign of the
  // minimum flips exactly at the critical exchange strength
  if (p.k >= 2 && critical_lambda(p)) {
    EpidemicParams q = p;
    const double lc = *critical_lambda(q);
    const double gmin = std::log(std::sqrt(static_cast<double>(q.k)));
    bool convex = true;
    for (int i = 1; i < 60; ++i) {
      const double g = 0.02 + i * 0.05;
      const double h = 0.01;
      const double second =
          dispersion(g + h, q) - 2.0 * dispersion(g, q) + dispersion(g - h, q);
      convex = convex && second > 0.0;
    }
    q.lambda = 1.3 * lc;
    const double dmin_above = dispersion(gmin, q);
    q.lambda = 0.7 * lc;
    const double dmin_below = dispersion(gmin, q);
    q.lambda = lc;
    const double dmin_at = dispersion(gmin, q);
    cr.record("dispersion_convex", convex, 0.0);
    cr.record("critical_lambda_sign",
              dmin_above < 0.0 && dmin_below > 0.0 && std::abs(dmin_at) <= 1e-12,
              dmin_at);
  }
}

void check_dynamics(CheckRunner& cr, const EpidemicParams& p) {
  // comparison principle on ordered cumulative problems
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto grid = std::make_shared<const RadialGrid>(build_grid(p.k, 32));
  bool ordered = true;
  double worst = 0.0;
  for (int rep = 0; rep < 5 && ordered; ++rep) {
    InitialCondition lo_ic, hi_ic;
    lo_ic.s0 = hi_ic.s0 = p.s0;
    const int root = grid->geometry == Geometry::Lattice ? 0 : 1;
    lo_ic.infected_support[root] = 0.01 + 0.02 * unif(rng);
    hi_ic.infected_support[root] = lo_ic.infected_support[root] + 0.02 * unif(rng);
    hi_ic.infected_support[root + 1] = 0.01 * unif(rng) + 1e-4;

    CumulativeState lo = make_kpp_initial(grid, lo_ic, 5);
    CumulativeState hi = make_kpp_initial(grid, hi_ic, 5);
    IntegrateOptions iopt{0.0, 10.0, 1.0};
    const auto lo_traj = integrate_kpp(lo, p, iopt);
    const auto hi_traj = integrate_kpp(hi, p, iopt);
    for (std::size_t s = 0; s < lo_traj.size(); ++s) {
      for (std::size_t i = 0; i < grid->size(); ++i) {
        const double gap = lo_traj[s].cum[i] - hi_traj[s].cum[i];
        worst = std::max(worst, gap);
        ordered = ordered && gap <= 1e-9;
      }
    }
  }
  cr.record("comparison_principle", ordered, worst);

  // weighted population conservation on a tree run
  {
    EpidemicParams q = p;
    q.k = std::max(2, p.k);
    auto tgrid = std::make_shared<const RadialGrid>(build_grid(q.k, 20));
    const SirState init = make_sir_initial(tgrid, tree_root_ic(q.s0, 0.01), 5);
    const auto traj = integrate_sir(init, q, IntegrateOptions{0.0, 20.0, 5.0});
    const double total0 = weighted_population(traj.front());
    double rel = 0.0;
    for (const auto& st : traj)
      rel = std::max(rel, std::abs(weighted_population(st) - total0) / total0);
    const auto istar = endemic_equilibrium(q);
    const bool margin_valid =
        margin_ok(*tgrid, cumulative_of(traj.back(), q), istar ? *istar / 2 : 1e-4, 5);
    if (!margin_valid) {
      cr.record("weighted_conservation", false, rel, "invalid_run: margin violated");
    } else {
      cr.record("weighted_conservation", rel <= 1e-8, rel);
    }
  }

  // monotonicity of the cumulative field and decay of susceptibles
  {
    auto g64 = std::make_shared<const RadialGrid>(build_grid(p.k, 64));
    const InitialCondition ic = p.k == 1 ? lattice_block_ic(p.s0, 0.01, -5, 5)
                                         : tree_root_ic(p.s0, 0.01);
    const auto kpp = integrate_kpp(make_kpp_initial(g64, ic, 5), p,
                                   IntegrateOptions{0.0, 15.0, 1.0});
    const auto sir = integrate_sir(make_sir_initial(g64, ic, 5), p,
                                   IntegrateOptions{0.0, 15.0, 1.0});
    double cum_drop = 0.0, s_rise = 0.0, negativity = 0.0;
    for (std::size_t s = 1; s < kpp.size(); ++s)
      for (std::size_t i = 0; i < g64->size(); ++i) {
        cum_drop = std::max(cum_drop, kpp[s - 1].cum[i] - kpp[s].cum[i]);
        s_rise = std::max(s_rise, sir[s].S[i] - sir[s - 1].S[i]);
        negativity = std::min({negativity, kpp[s].cum[i], sir[s].I[i], sir[s].S[i]});
      }
    cr.record("cumulative_monotone", cum_drop <= 1e-9, cum_drop);
    cr.record("susceptibles_decay", s_rise <= 1e-9, s_rise);
    cr.record("positivity", negativity >= -1e-9, negativity);

    // dual formulation: S from the cumulative field matches integrated S
    double gap = 0.0;
    const auto S_kpp = recover_susceptibles(kpp.back(), p);
    for (std::size_t i = 0; i < g64->size(); ++i)
      gap = std::max(gap, std::abs(S_kpp[i] - sir.back().S[i]));
    cr.record("formulation_equivalence", gap <= 1e-4, gap);
  }

  // fault injection: an over-sized step must be rejected as an integrator
  // error, not reported as an invariant failure
  {
    auto g = std::make_shared<const RadialGrid>(build_grid(p.k, 32));
    const InitialCondition ic = p.k == 1 ? lattice_block_ic(p.s0, 0.01, -5, 5)
                                         : tree_root_ic(p.s0, 0.01);
    bool caught = false;
    try {
      IntegrateOptions bad{2.0 * dt_max(p), 5.0, 1.0};
      integrate_kpp(make_kpp_initial(g, ic, 5), p, bad);
    } catch (const integrator_error&) {
      caught = true;
    }
    cr.record("oversized_dt_rejected", caught, 2.0 * dt_max(p));
  }

  // fault injection: a run whose front reaches the boundary is flagged invalid
  {
    EpidemicParams q = p;
    q.k = 1;
    auto g = std::make_shared<const RadialGrid>(build_grid(1, 16));
    const auto traj = integrate_kpp(
        make_kpp_initial(g, lattice_block_ic(q.s0, 0.01, -2, 2), 5), q,
        IntegrateOptions{0.0, 40.0, 5.0});
    const auto istar = endemic_equilibrium(q);
    const bool valid = margin_ok(*g, traj.back().cum, istar ? *istar / 2 : 1e-4, 10);
    cr.record("margin_violation_detected", !valid, 0.0,
              valid ? "" : "invalid_run verdict");
  }
}

void check_wavespeed(CheckRunner& cr, const EpidemicParams& p) {
  // first-order optimality of the analytic speed
  if (const auto speed = analytic_speed(p)) {
    const double h = 5e-7;
    const double hc = 1e-4;
    auto g = [&](double x) { return dispersion(x, p) / x; };
    const double d1 = (g(speed->gamma_star + h) - g(speed->gamma_star - h)) / (2.0 * h);
    const double d2 = g(speed->gamma_star + hc) - 2.0 * g(speed->gamma_star) +
                      g(speed->gamma_star - hc);
    cr.record("speed_first_order_optimality", std::abs(d1) <= 1e-8 && d2 > 0.0, d1);
    cr.record("speed_identity", std::abs(dispersion(speed->gamma_star, p) -
                                         speed->c_star * speed->gamma_star) <= 1e-10,
              dispersion(speed->gamma_star, p) - speed->c_star * speed->gamma_star);
  }

  // lambert residual over random draws
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = -std::exp(-1.0) + unif(rng) * (1e6 + std::exp(-1.0));
    const double w = lambert_w0(x);
    worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x)));
  }
  cr.record("lambert_residual", worst <= 1e-14, worst);

  // speed map shape in the exchange strength
  if (p.r0() > 1.0) {
    EpidemicParams q = p;
    q.k = 1;
    double prev = 0.0;
    bool increasing = true;
    for (int i = 0; i < 25; ++i) {
      q.lambda = std::pow(10.0, -2.0 + 4.0 * i / 24.0);
      const double c = analytic_speed(q)->c_star;
      if (i > 0) increasing = increasing && c > prev;
      prev = c;
    }
    cr.record("lattice_speed_monotone", increasing, prev);

    q.k = 2;
    q.lambda = 1.0;
    const double lc = *critical_lambda(q);
    const auto opt = *optimal_lambda(q);
    double best = 0.0, best_lambda = 0.0;
    for (int i = 1; i <= 40; ++i) {
      q.lambda = lc * i / 41.0;
      const double c = analytic_speed(q)->c_star;
      if (c > best) {
        best = c;
        best_lambda = q.lambda;
      }
    }
    cr.record("tree_speed_peak_near_lambda0",
              std::abs(best_lambda - opt.lambda0) <= lc / 41.0 + 1e-12,
              best_lambda - opt.lambda0);
    q.lambda = lc;
    cr.record("tree_speed_zero_at_lambda_c", analytic_speed(q)->c_star <= 1e-10,
              analytic_speed(q)->c_star);
  }
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  CheckRunner cr;
  check_core_model(cr, cfg.params);
  check_dynamics(cr, cfg.params);
  check_wavespeed(cr, cfg.params);

  json report = json::array();
  for (const auto& r : cr.results()) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << " measured=" << format_double(r.measured);
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << '\n';
    report.push_back(json{{"name", r.name},
                          {"pass", r.pass},
                          {"measured", r.measured},
                          {"detail", r.detail}});
  }
  write_file(cfg.out + "check.json", report.dump(2) + "\n");
  write_manifest(cfg, "check");
  out << (cr.all_pass() ? "all checks passed\n" : "some checks FAILED\n");
  return cr.all_pass() ? 0 : 1;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const config_error&) {
    return 2;
  } catch (const integrator_error&) {
    return 3;
  } catch (const convergence_error&) {
    return 3;
  } catch (const invalid_run_error&) {
    return 1;
  } catch (const std::exception&) {
    return 2;
  }
}

}  // namespace treesir::cli
