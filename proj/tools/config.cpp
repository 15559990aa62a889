#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>


#include "treesir/errors.hpp"
#include "treesir/integrate.hpp"
#include "treesir/io.hpp"

namespace treesir::cli {

namespace {

double parse_number(const std::string& value, const std::string& key,
                    const std::string& source) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error(source + ": value '" + value + "' for key '" + key +
                       "' is not a number");
  }
}

int parse_int(const std::string& value, const std::string& key,
              const std::string& source) {
  const double v = parse_number(value, key, source);
  if (v != std::floor(v))
    throw config_error(source + ": value '" + value + "' for key '" + key +
                       "' is not an integer");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& value, const std::string& key,
                const std::string& source) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw config_error(source + ": value '" + value + "' for key '" + key +
                     "' is not a boolean (use 0/1/true/false)");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value,
                     const std::string& source) {
  if (key == "tau") cfg.params.tau = parse_number(value, key, source);
  else if (key == "eta") cfg.params.eta = parse_number(value, key, source);
  else if (key == "lambda") cfg.params.lambda = parse_number(value, key, source);
  else if (key == "s0") cfg.params.s0 = parse_number(value, key, source);
  else if (key == "k") cfg.params.k = parse_int(value, key, source);
  else if (key == "n_shells") cfg.n_shells = parse_int(value, key, source);
  else if (key == "i0") cfg.i0 = parse_number(value, key, source);
  else if (key == "support_lo") cfg.support_lo = parse_int(value, key, source);
  else if (key == "support_hi") cfg.support_hi = parse_int(value, key, source);
  else if (key == "dt") cfg.dt = parse_number(value, key, source);
  else if (key == "t_end") cfg.t_end = parse_number(value, key, source);
  else if (key == "snapshot_every") cfg.snapshot_every = parse_number(value, key, source);
  else if (key == "model") {
    if (value == "sir") cfg.model = ModelKind::Sir;
    else if (value == "kpp") cfg.model = ModelKind::Kpp;
    else throw config_error(source + ": model must be 'sir' or 'kpp', got '" + value + "'");
  } else if (key == "tol") cfg.tol = parse_number(value, key, source);
  else if (key == "from") {
    if (value == "above") cfg.from = MarchFrom::Above;
    else if (value == "below") cfg.from = MarchFrom::Below;
    else if (value == "both") cfg.from = MarchFrom::Both;
    else throw config_error(source + ": from must be above|below|both, got '" + value + "'");
  } else if (key == "t_max") cfg.t_max = parse_number(value, key, source);
  else if (key == "margin") cfg.margin = parse_int(value, key, source);
  else if (key == "window") cfg.window = parse_int(value, key, source);
  else if (key == "theta_frac") cfg.theta_frac = parse_number(value, key, source);
  else if (key == "fit_fraction") cfg.fit_fraction = parse_number(value, key, source);
  else if (key == "empirical") cfg.empirical = parse_bool(value, key, source);
  else if (key == "k_list") cfg.k_list = value;
  else if (key == "sweep_lo") cfg.sweep_lo = parse_number(value, key, source);
  else if (key == "sweep_hi") cfg.sweep_hi = parse_number(value, key, source);
  else if (key == "sweep_count") cfg.sweep_count = parse_int(value, key, source);
  else if (key == "experiment") {
    if (value == "simulate") cfg.experiment = Experiment::Simulate;
    else if (value == "stationary") cfg.experiment = Experiment::Stationary;
    else if (value == "speed") cfg.experiment = Experiment::Speed;
    else if (value == "sweep") cfg.experiment = Experiment::Sweep;
    else if (value == "check") cfg.experiment = Experiment::Check;
    else throw config_error(source + ": unknown experiment '" + value + "'");
  } else if (key == "out") cfg.out = value;
  else if (key == "format") {
    if (value != "json" && value != "csv")
      throw config_error(source + ": format must be json or csv, got '" + value + "'");
    cfg.format = value;
  } else if (key == "workers") cfg.workers = parse_int(value, key, source);
  else throw config_error(source + ": unknown key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    const std::string source = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw config_error(source + ": expected key=value, got '" + stripped + "'");
    apply_key_value(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)),
                    source);
  }
}

void apply_set_flag(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw config_error("--set expects key=value, got '" + assignment + "'");
  apply_key_value(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)),
                  "--set " + assignment);
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw config_error(where + ": expected key=value, got '" + stripped + "'");
    apply_key_value(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)),
                    where);
  }
  return cfg;
}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Simulate: return "simulate";
    case Experiment::Stationary: return "stationary";
    case Experiment::Speed: return "speed";
    case Experiment::Sweep: return "sweep";
    case Experiment::Check: return "check";
  }
  return "simulate";
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "tau=" << format_double(cfg.params.tau) << '\n'
     << "eta=" << format_double(cfg.params.eta) << '\n'
     << "lambda=" << format_double(cfg.params.lambda) << '\n'
     << "s0=" << format_double(cfg.params.s0) << '\n'
     << "k=" << cfg.params.k << '\n'
     << "n_shells=" << cfg.n_shells << '\n'
     << "i0=" << format_double(cfg.i0) << '\n'
     << "support_lo=" << cfg.support_lo << '\n'
     << "support_hi=" << cfg.support_hi << '\n'
     << "dt=" << format_double(cfg.dt) << '\n'
     << "t_end=" << format_double(cfg.t_end) << '\n'
     << "snapshot_every=" << format_double(cfg.snapshot_every) << '\n'
     << "model=" << (cfg.model == ModelKind::Sir ? "sir" : "kpp") << '\n'
     << "tol=" << format_double(cfg.tol) << '\n'
     << "from="
     << (cfg.from == MarchFrom::Above ? "above"
                                      : cfg.from == MarchFrom::Below ? "below" : "both")
     << '\n'
     << "t_max=" << format_double(cfg.t_max) << '\n'
     << "margin=" << cfg.margin << '\n'
     << "window=" << cfg.window << '\n'
     << "theta_frac=" << format_double(cfg.theta_frac) << '\n'
     << "fit_fraction=" << format_double(cfg.fit_fraction) << '\n'
     << "empirical=" << (cfg.empirical ? 1 : 0) << '\n'
     << "k_list=" << cfg.k_list << '\n'
     << "sweep_lo=" << format_double(cfg.sweep_lo) << '\n'
     << "sweep_hi=" << format_double(cfg.sweep_hi) << '\n'
     << "sweep_count=" << cfg.sweep_count << '\n'
     << "experiment=" << experiment_name(cfg.experiment) << '\n'
     << "out=" << cfg.out << '\n'
     << "format=" << cfg.format << '\n'
     << "workers=" << cfg.workers << '\n';
  return os.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.params.tau == b.params.tau && a.params.eta == b.params.eta &&
         a.params.lambda == b.params.lambda && a.params.s0 == b.params.s0 &&
         a.params.k == b.params.k && a.n_shells == b.n_shells && a.i0 == b.i0 &&
         a.support_lo == b.support_lo && a.support_hi == b.support_hi && a.dt == b.dt &&
         a.t_end == b.t_end && a.snapshot_every == b.snapshot_every &&
         a.model == b.model && a.tol == b.tol && a.from == b.from && a.t_max == b.t_max &&
         a.margin == b.margin && a.window == b.window && a.theta_frac == b.theta_frac &&
         a.fit_fraction == b.fit_fraction && a.empirical == b.empirical &&
         a.k_list == b.k_list && a.sweep_lo == b.sweep_lo && a.sweep_hi == b.sweep_hi &&
         a.sweep_count == b.sweep_count && a.experiment == b.experiment &&
         a.out == b.out && a.format == b.format && a.workers == b.workers;
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("invalid parameters: ") + e.what());
  }
  if (n_shells < 8) throw config_error("n_shells must be >= 8");
  if (!(i0 > 0.0 && i0 < 1.0)) throw config_error("i0 must lie in (0,1)");
  if (params.k == 1 && support_lo > support_hi)
    throw config_error("support_lo must be <= support_hi");
  if (dt < 0.0) throw config_error("dt must be >= 0 (0 selects the stability bound)");
  if (dt > 0.0 && dt > dt_max(params))
    throw config_error("dt exceeds the stability bound dt_max = " +
                       format_double(dt_max(params)));
  if (!(t_end > 0.0)) throw config_error("t_end must be > 0");
  if (!(snapshot_every > 0.0)) throw config_error("snapshot_every must be > 0");
  if (!(tol > 0.0)) throw config_error("tol must be > 0");
  if (!(t_max > 0.0)) throw config_error("t_max must be > 0");
  if (margin < 0) throw config_error("margin must be >= 0");
  if (window < 2) throw config_error("window must be >= 2");
  if (!(theta_frac > 0.0 && theta_frac < 1.0))
    throw config_error("theta_frac must lie in (0,1)");
  if (!(fit_fraction > 0.0 && fit_fraction <= 1.0))
    throw config_error("fit_fraction must lie in (0,1]");
  if (sweep_count < 1) throw config_error("sweep_count must be >= 1");
  if (!(sweep_lo > 0.0) || !(sweep_hi >= sweep_lo))
    throw config_error("sweep range must satisfy 0 < sweep_lo <= sweep_hi");
  if (workers < 1) throw config_error("workers must be >= 1");
  if (parse_k_list().empty()) throw config_error("k_list must name at least one degree");
}

InitialCondition RunConfig::initial_condition() const {
  if (params.k == 1) return lattice_block_ic(params.s0, i0, support_lo, support_hi);
  return tree_root_ic(params.s0, i0);
}

std::vector<int> RunConfig::parse_k_list() const {
  std::vector<int> ks;
  std::istringstream in(k_list);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) continue;
    try {
      ks.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw config_error("k_list entry '" + t + "' is not an integer");
    }
    if (ks.back() < 1) throw config_error("k_list entries must be >= 1");
  }
  return ks;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  return nlohmann::json{{"tau", cfg.params.tau},
                        {"eta", cfg.params.eta},
                        {"lambda", cfg.params.lambda},
                        {"s0", cfg.params.s0},
                        {"k", cfg.params.k},
                        {"n_shells", cfg.n_shells},
                        {"i0", cfg.i0},
                        {"support_lo", cfg.support_lo},
                        {"support_hi", cfg.support_hi},
                        {"dt", cfg.dt},
                        {"t_end", cfg.t_end},
                        {"snapshot_every", cfg.snapshot_every},
                        {"model", cfg.model == ModelKind::Sir ? "sir" : "kpp"},
                        {"tol", cfg.tol},
                        {"from", cfg.from == MarchFrom::Above   ? "above"
                                 : cfg.from == MarchFrom::Below ? "below"
                                                                : "both"},
                        {"t_max", cfg.t_max},
                        {"margin", cfg.margin},
                        {"window", cfg.window},
                        {"theta_frac", cfg.theta_frac},
                        {"fit_fraction", cfg.fit_fraction},
                        {"empirical", cfg.empirical},
                        {"k_list", cfg.k_list},
                        {"sweep_lo", cfg.sweep_lo},
                        {"sweep_hi", cfg.sweep_hi},
                        {"sweep_count", cfg.sweep_count},
                        {"experiment", experiment_name(cfg.experiment)},
                        {"out", cfg.out},
                        {"format", cfg.format},
                        {"workers", cfg.workers}};
}

}  // namespace treesir::cli
