#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "treesir/params.hpp"
#include "treesir/state.hpp"
#include "treesir/stationary.hpp"

namespace treesir::cli {

enum class Experiment { Simulate, Stationary, Speed, Sweep, Check };

enum class ModelKind { Sir, Kpp };

/// Flat key=value run configuration. Every field has a documented default; a
/// config file and repeated --set overrides are applied in order, later wins.
struct RunConfig {
  EpidemicParams params{2.0, 1.0, 1.0, 0.9, 2};  // tau, eta, lambda, s0, k
  int n_shells = 400;

  // initial condition
  double i0 = 0.005;
  int support_lo = -10;  // lattice block; the tree always seeds the root only
  int support_hi = 10;

  // integrator
  double dt = 0.0;  // 0 = stability bound
  double t_end = 110.0;
  double snapshot_every = 1.0;

  ModelKind model = ModelKind::Sir;

  // stationary solve
  double tol = 1e-8;
  MarchFrom from = MarchFrom::Below;
  double t_max = 1e4;

  // measurement
  int margin = 10;
  int window = 20;
  double theta_frac = 0.5;    // front threshold as a fraction of istar
  double fit_fraction = 0.5;

  // speed / sweep
  bool empirical = false;
  std::string k_list = "1,2,3,4,5";
  double sweep_lo = 0.02;
  double sweep_hi = 6.0;
  int sweep_count = 50;

  Experiment experiment = Experiment::Simulate;
  std::string out = "out_";
  std::string format = "json";  // derive/check report format: json or csv
  int workers = 1;

  /// Throws config_error with a field diagnostic on any invalid value.
  void validate() const;

  InitialCondition initial_condition() const;
  std::vector<int> parse_k_list() const;
};

/// Applies "key=value" lines (# comments, blank lines allowed). `source` is
/// used in diagnostics, e.g. "config.txt:3" or "--set".
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value,
                     const std::string& source);

/// Loads a config file; throws config_error with file:line diagnostics.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Parses one --set argument of the form key=value.
void apply_set_flag(RunConfig& cfg, const std::string& assignment);

/// Canonical key=value serialization; parse(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<text>");

bool operator==(const RunConfig& a, const RunConfig& b);

nlohmann::json config_to_json(const RunConfig& cfg);

std::string experiment_name(Experiment e);

}  // namespace treesir::cli
