// Run configuration: flat "key = value" text with dotted section keys.
// '#' starts a comment, blank lines are skipped, unknown keys are errors.
// The full key set with defaults is spelled out by RunConfig below; the
// normalized echo written into every run directory is itself a valid config.

#ifndef LPRF_CONFIG_H
#define LPRF_CONFIG_H

#include <stdexcept>
#include <string>

#include "lprf/symmetry.hpp"

namespace lprf {

// Malformed or invalid configuration. line = 0 when the failure is not tied
// to a specific line (cross-key validation).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_ = 0;
  std::string key_;
};

struct RunConfig {
  // data spec
  std::string data_profile = "swirl";  // swirl | radial | zero | file
  double data_amplitude = 0.05;
  std::string data_file;               // fundamental samples, profile = file
  int data_ntheta = 12;
  int data_nphi = 12;
  int data_nr = 3;

  // symmetry spec
  std::string symmetry_class = "ss";   // ss | rss | dss | rdss
  double symmetry_lambda = 2.0;        // discrete classes, > 1
  double symmetry_alpha = 0.0;         // rss rotation rate
  double symmetry_phi = 0.0;           // rdss rotation phase per cell

  // data splitting
  double split_p = 4.0;                // Lp exponent of the bounded part
  double split_epsilon = 0.0;          // 0: auto (0.1)
  std::string split_mode = "auto";     // auto | skip | force

  // discretization
  int grid_n = 32;                     // power of two
  double grid_half_width = 4.0;
  int galerkin_modes = 32;
  int galerkin_s_nodes = 8;            // assembly nodes per period
  double galerkin_dt = 0.0;            // 0: stability bound
  double galerkin_mollification = 0.1;
  double galerkin_rho = 0.0;           // 0: from a trial orbit

  // solver tolerances
  double solver_tol = 1e-9;
  int solver_max_iterations = 200;
  double solver_damping = 0.5;         // initial fixed-point damping, (0, 1]

  // mild small-data solver
  int mild_n_times = 8;
  int mild_panels = 4;
  int mild_max_iterations = 24;
  double mild_tolerance = 1e-9;

  // background
  double background_alpha_bound = 0.5;
  double background_q = 4.0;

  // diagnostics toggles
  bool diagnostics_local_energy = true;
  bool diagnostics_rate_fits = true;
  bool diagnostics_apriori = true;
  unsigned diagnostics_seed = 12;
  // Relative finite-difference shell divergence above which a datum is
  // flagged as not divergence free. Lattice extensions of solenoidal data
  // sit well below this at practical resolutions; genuinely divergent data
  // sit at order one.
  double diagnostics_div_tol = 0.25;

  // run
  int run_threads = 0;                 // 0: LPRF_THREADS env, else 1
  unsigned run_seed = 0;

  // Effective splitting threshold (auto default applied).
  double effective_epsilon() const { return split_epsilon > 0.0 ? split_epsilon : 0.1; }
};

// Parse configuration text / file. Throws ConfigError with the offending
// line and key.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Normalized echo of every key in declaration order; parses back to an
// identical config. run.threads is omitted (it never affects results).
std::string config_echo(const RunConfig& cfg);

// Symmetry spec from the symmetry.* keys (validated).
SymmetrySpec config_symmetry(const RunConfig& cfg);

}  // namespace lprf

#endif
