// Pipeline commands behind the command-line driver: analyze a datum, run
// the full construction (split, mild small-data solve, background, Galerkin
// orbit, composition, diagnostics), re-verify a finished run directory from
// its stored fields, and sweep a discretization axis.
//
// Every command returns a process exit code: 0 success, 2 configuration
// error, 3 stage failure, 4 artifact integrity error. cmd_solve writes the
// artifacts produced so far even when a later stage fails, and the report
// names the failed stage.

#ifndef LPRF_PIPELINE_H
#define LPRF_PIPELINE_H

#include <stdexcept>
#include <string>

#include "lprf/config.hpp"
#include "lprf/report.hpp"

namespace lprf {

// A pipeline stage violated its postcondition (solver did not converge,
// splitting missed its threshold, background too large, ...).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStage = 3;
inline constexpr int kExitIntegrity = 4;

// Data norms, Littlewood-Paley table, symmetry and divergence defects.
// Writes config.echo, report.kv, report.txt (and timings.txt) into out_dir.
int cmd_analyze(const RunConfig& cfg, const std::string& out_dir, Report* out = nullptr);

// Full construction. Writes the field artifacts under out_dir/fields plus
// the reports; diagnostics entries live under the "diag." prefix so that
// cmd_verify can be compared against them verbatim.
int cmd_solve(const RunConfig& cfg, const std::string& out_dir, Report* out = nullptr);

// Recompute the diagnostics battery of a finished run directory from its
// stored artifacts; writes verify.kv / verify.txt into the directory. The
// "diag." section reproduces the solve-time section exactly.
int cmd_verify(const std::string& run_dir, Report* out = nullptr);

// Re-solve across one axis: "modes", "mollification", or "grid". Values
// come from `values` (>= 3 entries). Writes sweep.csv (header row, one row
// per level, levels that fail are marked and the sweep continues).
int cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::vector<double>& values,
              const std::string& out_dir, Report* out = nullptr);

// Effective worker count: explicit argument > 0 wins, else LPRF_THREADS,
// else 1.
int resolve_threads(int requested);

}  // namespace lprf

#endif
