#include "lprf/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lprf {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(int line, const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, key, "expected a number, got '" + value + "'");
  }
}

int parse_int(int line, const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return int(v);
  } catch (const std::exception&) {
    throw ConfigError(line, key, "expected an integer, got '" + value + "'");
  }
}

bool parse_bool(int line, const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError(line, key, "expected true/false, got '" + value + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ", key '" + key +
                                        "': " + message
                                  : "config key '" + key + "': " + message),
      line_(line),
      key_(std::move(key)) {}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;

  using Setter = std::function<void(int, const std::string&)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"data.profile", [&](int, const std::string& v) { cfg.data_profile = v; }},
      {"data.amplitude",
       [&](int l, const std::string& v) { cfg.data_amplitude = parse_double(l, "data.amplitude", v); }},
      {"data.file", [&](int, const std::string& v) { cfg.data_file = v; }},
      {"data.ntheta",
       [&](int l, const std::string& v) { cfg.data_ntheta = parse_int(l, "data.ntheta", v); }},
      {"data.nphi",
       [&](int l, const std::string& v) { cfg.data_nphi = parse_int(l, "data.nphi", v); }},
      {"data.nr", [&](int l, const std::string& v) { cfg.data_nr = parse_int(l, "data.nr", v); }},
      {"symmetry.class", [&](int, const std::string& v) { cfg.symmetry_class = v; }},
      {"symmetry.lambda",
       [&](int l, const std::string& v) { cfg.symmetry_lambda = parse_double(l, "symmetry.lambda", v); }},
      {"symmetry.alpha",
       [&](int l, const std::string& v) { cfg.symmetry_alpha = parse_double(l, "symmetry.alpha", v); }},
      {"symmetry.phi",
       [&](int l, const std::string& v) { cfg.symmetry_phi = parse_double(l, "symmetry.phi", v); }},
      {"split.p", [&](int l, const std::string& v) { cfg.split_p = parse_double(l, "split.p", v); }},
      {"split.epsilon",
       [&](int l, const std::string& v) { cfg.split_epsilon = parse_double(l, "split.epsilon", v); }},
      {"split.mode", [&](int, const std::string& v) { cfg.split_mode = v; }},
      {"grid.n", [&](int l, const std::string& v) { cfg.grid_n = parse_int(l, "grid.n", v); }},
      {"grid.half_width",
       [&](int l, const std::string& v) { cfg.grid_half_width = parse_double(l, "grid.half_width", v); }},
      {"galerkin.modes",
       [&](int l, const std::string& v) { cfg.galerkin_modes = parse_int(l, "galerkin.modes", v); }},
      {"galerkin.s_nodes",
       [&](int l, const std::string& v) { cfg.galerkin_s_nodes = parse_int(l, "galerkin.s_nodes", v); }},
      {"galerkin.dt",
       [&](int l, const std::string& v) { cfg.galerkin_dt = parse_double(l, "galerkin.dt", v); }},
      {"galerkin.mollification",
       [&](int l, const std::string& v) {
         cfg.galerkin_mollification = parse_double(l, "galerkin.mollification", v);
       }},
      {"galerkin.rho",
       [&](int l, const std::string& v) { cfg.galerkin_rho = parse_double(l, "galerkin.rho", v); }},
      {"solver.tol",
       [&](int l, const std::string& v) { cfg.solver_tol = parse_double(l, "solver.tol", v); }},
      {"solver.max_iterations",
       [&](int l, const std::string& v) {
         cfg.solver_max_iterations = parse_int(l, "solver.max_iterations", v);
       }},
      {"solver.damping",
       [&](int l, const std::string& v) { cfg.solver_damping = parse_double(l, "solver.damping", v); }},
      {"mild.n_times",
       [&](int l, const std::string& v) { cfg.mild_n_times = parse_int(l, "mild.n_times", v); }},
      {"mild.panels",
       [&](int l, const std::string& v) { cfg.mild_panels = parse_int(l, "mild.panels", v); }},
      {"mild.max_iterations",
       [&](int l, const std::string& v) {
         cfg.mild_max_iterations = parse_int(l, "mild.max_iterations", v);
       }},
      {"mild.tolerance",
       [&](int l, const std::string& v) { cfg.mild_tolerance = parse_double(l, "mild.tolerance", v); }},
      {"background.alpha_bound",
       [&](int l, const std::string& v) {
         cfg.background_alpha_bound = parse_double(l, "background.alpha_bound", v);
       }},
      {"background.q",
       [&](int l, const std::string& v) { cfg.background_q = parse_double(l, "background.q", v); }},
      {"diagnostics.local_energy",
       [&](int l, const std::string& v) {
         cfg.diagnostics_local_energy = parse_bool(l, "diagnostics.local_energy", v);
       }},
      {"diagnostics.rate_fits",
       [&](int l, const std::string& v) {
         cfg.diagnostics_rate_fits = parse_bool(l, "diagnostics.rate_fits", v);
       }},
      {"diagnostics.apriori",
       [&](int l, const std::string& v) {
         cfg.diagnostics_apriori = parse_bool(l, "diagnostics.apriori", v);
       }},
      {"diagnostics.seed",
       [&](int l, const std::string& v) {
         cfg.diagnostics_seed = unsigned(parse_int(l, "diagnostics.seed", v));
       }},
      {"diagnostics.div_tol",
       [&](int l, const std::string& v) {
         cfg.diagnostics_div_tol = parse_double(l, "diagnostics.div_tol", v);
       }},
      {"run.threads",
       [&](int l, const std::string& v) { cfg.run_threads = parse_int(l, "run.threads", v); }},
      {"run.seed",
       [&](int l, const std::string& v) { cfg.run_seed = unsigned(parse_int(l, "run.seed", v)); }},
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, line, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, key, "empty key");
    if (value.empty()) throw ConfigError(line_no, key, "empty value");
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(line_no, key, "unknown key");
    it->second(line_no, value);
  }

  // Cross-key validation.
  if (cfg.data_profile != "swirl" && cfg.data_profile != "radial" && cfg.data_profile != "zero" &&
      cfg.data_profile != "file")
    throw ConfigError(0, "data.profile", "unknown profile '" + cfg.data_profile + "'");
  if (cfg.data_profile == "file" && cfg.data_file.empty())
    throw ConfigError(0, "data.file", "profile 'file' needs a path");
  if (cfg.data_ntheta < 2 || cfg.data_nphi < 2 || cfg.data_nr < 1)
    throw ConfigError(0, "data.ntheta", "fundamental sampling must be at least 2 x 2 x 1");
  if (cfg.symmetry_class != "ss" && cfg.symmetry_class != "rss" && cfg.symmetry_class != "dss" &&
      cfg.symmetry_class != "rdss")
    throw ConfigError(0, "symmetry.class", "unknown class '" + cfg.symmetry_class + "'");
  const bool discrete = cfg.symmetry_class == "dss" || cfg.symmetry_class == "rdss";
  if (discrete && !(cfg.symmetry_lambda > 1.0))
    throw ConfigError(0, "symmetry.lambda", "discrete classes need lambda > 1");
  if (!(cfg.split_p > 3.0))
    throw ConfigError(0, "split.p", "the bounded-part exponent must exceed 3");
  if (cfg.split_epsilon < 0.0) throw ConfigError(0, "split.epsilon", "must be >= 0 (0 = auto)");
  if (cfg.split_mode != "auto" && cfg.split_mode != "skip" && cfg.split_mode != "force")
    throw ConfigError(0, "split.mode", "expected auto | skip | force");
  if (!power_of_two(cfg.grid_n) || cfg.grid_n < 4)
    throw ConfigError(0, "grid.n", "grid size must be a power of two, at least 4");
  if (!(cfg.grid_half_width > 0.0)) throw ConfigError(0, "grid.half_width", "must be positive");
  if (cfg.galerkin_modes < 1) throw ConfigError(0, "galerkin.modes", "need at least one mode");
  if (cfg.galerkin_s_nodes < 1) throw ConfigError(0, "galerkin.s_nodes", "need at least one node");
  if (cfg.galerkin_dt < 0.0) throw ConfigError(0, "galerkin.dt", "must be >= 0 (0 = auto)");
  if (cfg.galerkin_mollification < 0.0)
    throw ConfigError(0, "galerkin.mollification", "must be >= 0");
  if (cfg.galerkin_rho < 0.0) throw ConfigError(0, "galerkin.rho", "must be >= 0 (0 = auto)");
  if (!(cfg.solver_tol > 0.0)) throw ConfigError(0, "solver.tol", "must be positive");
  if (cfg.solver_max_iterations < 1)
    throw ConfigError(0, "solver.max_iterations", "need at least one iteration");
  if (!(cfg.solver_damping > 0.0) || cfg.solver_damping > 1.0)
    throw ConfigError(0, "solver.damping", "must lie in (0, 1]");
  if (cfg.mild_n_times < 2 || cfg.mild_panels < 1 || cfg.mild_max_iterations < 1)
    throw ConfigError(0, "mild.n_times", "mild solver sizes must be positive (n_times >= 2)");
  if (!(cfg.mild_tolerance > 0.0)) throw ConfigError(0, "mild.tolerance", "must be positive");
  if (!(cfg.background_alpha_bound > 0.0))
    throw ConfigError(0, "background.alpha_bound", "must be positive");
  if (!(cfg.background_q > 3.0))
    throw ConfigError(0, "background.q", "the local exponent must exceed 3");
  if (!(cfg.diagnostics_div_tol > 0.0))
    throw ConfigError(0, "diagnostics.div_tol", "must be positive");
  if (cfg.run_threads < 0) throw ConfigError(0, "run.threads", "must be >= 0 (0 = env)");

  // The symmetry parameters must form a valid spec.
  try {
    config_symmetry(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "symmetry.class", e.what());
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  out << "data.profile = " << cfg.data_profile << "\n";
  out << "data.amplitude = " << format_double(cfg.data_amplitude) << "\n";
  if (!cfg.data_file.empty()) out << "data.file = " << cfg.data_file << "\n";
  out << "data.ntheta = " << cfg.data_ntheta << "\n";
  out << "data.nphi = " << cfg.data_nphi << "\n";
  out << "data.nr = " << cfg.data_nr << "\n";
  out << "symmetry.class = " << cfg.symmetry_class << "\n";
  out << "symmetry.lambda = " << format_double(cfg.symmetry_lambda) << "\n";
  out << "symmetry.alpha = " << format_double(cfg.symmetry_alpha) << "\n";
  out << "symmetry.phi = " << format_double(cfg.symmetry_phi) << "\n";
  out << "split.p = " << format_double(cfg.split_p) << "\n";
  out << "split.epsilon = " << format_double(cfg.split_epsilon) << "\n";
  out << "split.mode = " << cfg.split_mode << "\n";
  out << "grid.n = " << cfg.grid_n << "\n";
  out << "grid.half_width = " << format_double(cfg.grid_half_width) << "\n";
  out << "galerkin.modes = " << cfg.galerkin_modes << "\n";
  out << "galerkin.s_nodes = " << cfg.galerkin_s_nodes << "\n";
  out << "galerkin.dt = " << format_double(cfg.galerkin_dt) << "\n";
  out << "galerkin.mollification = " << format_double(cfg.galerkin_mollification) << "\n";
  out << "galerkin.rho = " << format_double(cfg.galerkin_rho) << "\n";
  out << "solver.tol = " << format_double(cfg.solver_tol) << "\n";
  out << "solver.max_iterations = " << cfg.solver_max_iterations << "\n";
  out << "solver.damping = " << format_double(cfg.solver_damping) << "\n";
  out << "mild.n_times = " << cfg.mild_n_times << "\n";
  out << "mild.panels = " << cfg.mild_panels << "\n";
  out << "mild.max_iterations = " << cfg.mild_max_iterations << "\n";
  out << "mild.tolerance = " << format_double(cfg.mild_tolerance) << "\n";
  out << "background.alpha_bound = " << format_double(cfg.background_alpha_bound) << "\n";
  out << "background.q = " << format_double(cfg.background_q) << "\n";
  out << "diagnostics.local_energy = " << (cfg.diagnostics_local_energy ? "true" : "false") << "\n";
  out << "diagnostics.rate_fits = " << (cfg.diagnostics_rate_fits ? "true" : "false") << "\n";
  out << "diagnostics.apriori = " << (cfg.diagnostics_apriori ? "true" : "false") << "\n";
  out << "diagnostics.seed = " << cfg.diagnostics_seed << "\n";
  out << "diagnostics.div_tol = " << format_double(cfg.diagnostics_div_tol) << "\n";
  out << "run.seed = " << cfg.run_seed << "\n";
  return out.str();
}

SymmetrySpec config_symmetry(const RunConfig& cfg) {
  if (cfg.symmetry_class == "ss") return SymmetrySpec::ss();
  if (cfg.symmetry_class == "rss") return SymmetrySpec::rss(cfg.symmetry_alpha);
  if (cfg.symmetry_class == "dss") return SymmetrySpec::dss(cfg.symmetry_lambda);
  return SymmetrySpec::rdss(cfg.symmetry_lambda, cfg.symmetry_phi);
}

}  // namespace lprf
