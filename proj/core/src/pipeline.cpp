// Pipeline commands: analyze, solve, verify, sweep. The solve pipeline runs
// data -> split -> mild -> background -> galerkin -> compose -> diagnostics,
// writing field artifacts as each stage finishes so a failed run keeps its
// partial output. Reports contain no wall-clock data (that goes to
// timings.txt), so repeated runs of the same configuration produce
// byte-identical report.kv files.

#include "lprf/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lprf/background.hpp"
#include "lprf/compose.hpp"
#include "lprf/diagnostics.hpp"
#include "lprf/fieldio.hpp"
#include "lprf/galerkin.hpp"
#include "lprf/mild.hpp"
#include "lprf/norms.hpp"
#include "lprf/parallel.hpp"
#include "lprf/spectral.hpp"
#include "lprf/splitting.hpp"
#include "lprf/stencil.hpp"
#include "lprf/symmetry.hpp"
#include "lprf/transform.hpp"

namespace lprf {

StageError::StageError(std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// Wall-clock bookkeeping plus a uniform failure surface: a plain exception
// inside a stage becomes a StageError carrying the stage name, while
// ConfigError / IntegrityError / StageError keep their type (and exit code).
class StageRunner {
 public:
  explicit StageRunner(StageTimings& t) : timings_(t) {}

  template <class Fn>
  void run(const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (...) {
      record(name, t0);
      try {
        throw;
      } catch (const ConfigError&) {
        throw;
      } catch (const IntegrityError&) {
        throw;
      } catch (const StageError&) {
        throw;
      } catch (const std::exception& e) {
        throw StageError(name, e.what());
      }
    }
    record(name, t0);
  }

 private:
  void record(const std::string& name, std::chrono::steady_clock::time_point t0) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    timings_.seconds.emplace_back(name, dt.count());
  }

  StageTimings& timings_;
};

BesovParams besov_params_for(const RunConfig& cfg) {
  BesovParams bp;
  bp.p = cfg.split_p;
  bp.s = -1.0 + 3.0 / cfg.split_p;
  const SymmetrySpec spec = config_symmetry(cfg);
  bp.lambda = spec.continuous() ? 2.0 : spec.lambda;
  return bp;
}

// Tabulated fundamental-domain samples. Text format: a magic line
// "LPRF-DATA1", then ntheta / nphi / nr as "key = value" lines, a "samples"
// line, ntheta*nphi*nr whitespace-separated sample triples in (ir, itheta,
// iphi) order with iphi fastest, and a closing "end".
FundamentalData load_fundamental_file(const std::string& path, const SymmetrySpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "data.file", "cannot open '" + path + "'");
  const auto fail = [&path](const std::string& what) {
    return ConfigError(0, "data.file", "'" + path + "': " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "LPRF-DATA1") throw fail("missing LPRF-DATA1 magic");
  int ntheta = 0, nphi = 0, nr = 0;
  while (std::getline(in, line)) {
    if (line == "samples") break;
    std::istringstream ls(line);
    std::string key, eq;
    long value = 0;
    if (!(ls >> key >> eq >> value) || eq != "=") throw fail("bad header line '" + line + "'");
    if (key == "ntheta") ntheta = int(value);
    else if (key == "nphi") nphi = int(value);
    else if (key == "nr") nr = int(value);
    else throw fail("unknown header key '" + key + "'");
  }
  if (ntheta < 2 || nphi < 2 || nr < 1) throw fail("need ntheta >= 2, nphi >= 2, nr >= 1");
  FundamentalData data = FundamentalData::from_function(
      spec, ntheta, nphi, nr, [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; });
  for (int ir = 0; ir < data.nr(); ++ir)
    for (int it = 0; it < ntheta; ++it)
      for (int ip = 0; ip < nphi; ++ip) {
        Vec3 v;
        if (!(in >> v.x >> v.y >> v.z)) throw fail("short sample table");
        data.sample(ir, it, ip) = v;
      }
  std::string tail;
  if (!(in >> tail) || tail != "end") throw fail("missing end marker after samples");
  return data;
}

FundamentalData make_data(const RunConfig& cfg, const SymmetrySpec& spec) {
  if (cfg.data_profile == "file") return load_fundamental_file(cfg.data_file, spec);
  const double amp = cfg.data_amplitude;
  std::function<Vec3(const Vec3&)> fn;
  if (cfg.data_profile == "zero") {
    fn = [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
  } else if (cfg.data_profile == "swirl") {
    // amp (-y, x, 0) / |x|^2: (-1)-homogeneous and exactly divergence free.
    fn = [amp](const Vec3& p) {
      const double r2 = norm2(p);
      return Vec3{-p.y * amp / r2, p.x * amp / r2, 0.0};
    };
  } else {
    // amp x / |x|^2: (-1)-homogeneous with divergence amp / |x|^2, the
    // deliberate negative control for the divergence check.
    fn = [amp](const Vec3& p) { return p * (amp / norm2(p)); };
  }
  return FundamentalData::from_function(spec, cfg.data_ntheta, cfg.data_nphi, cfg.data_nr, fn);
}

// L2 distance between two node fields, evaluated on the coarser of the two
// lattices (trilinear sampling is exact at matching nodes).
double field_l2_difference(const VectorField& a, const VectorField& b) {
  const BoxGrid& g = (a.grid().n <= b.grid().n) ? a.grid() : b.grid();
  const double h = g.spacing();
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const Vec3 x = g.node(i, j, k);
        acc += norm2(a.sample(x) - b.sample(x));
      }
  return std::sqrt(acc * h * h * h);
}

// Roll the solved trajectory out over a long similarity window: periodic
// orbits wrap, steady ones repeat node 0. Spans at least t_max / t_min = 32
// so decay fits over it are well posed.
ProfileTrajectory roll_out(const ProfileTrajectory& A, double T) {
  const double span = std::max(std::log(32.0), 2.5 * T);
  const int m = 12;
  ProfileTrajectory rolled(A.grid(), A.alpha());
  for (int j = 0; j < m; ++j) {
    const double s = span * double(j) / double(m - 1);
    VectorField u = (A.period() > 0.0) ? A.velocity_at(A.s_node(0) + s) : A.velocity(0);
    rolled.add_node(s, std::move(u));
  }
  return rolled;
}

// Shared between cmd_solve and cmd_verify: every entry is a function of the
// configuration and the three stored artifacts (data, trajectory, physical
// solution) alone, so verify reproduces the solve-time section verbatim.
void diagnostics_section(Report& rep, const RunConfig& cfg, const VectorField& v0,
                         const ProfileTrajectory& A, const PhysicalField& v, int threads) {
  const SymmetrySpec spec = config_symmetry(cfg);
  const double T = spec.period();

  rep.add("diag.steadiness", steadiness_defect(A));
  const ProfileTrajectory rolled = roll_out(A, T);
  rep.add("diag.periodicity", periodicity_defect(rolled, T));
  rep.add("diag.symmetry_data", symmetry_defect(v0, spec));

  const Slice& first = v.slice(0);
  rep.add("diag.global.data_energy", lp_norm(first.values, 2.0) * lp_norm(first.values, 2.0));
  rep.add("diag.global.slack", global_energy_check(v, first.values));

  if (cfg.diagnostics_local_energy) {
    const BoxGrid& g = first.values.grid();
    const double margin = std::max(0.08 * g.half_width, 2.5 * g.spacing());
    const std::vector<BumpSpec> bumps = bump_battery(
        g.half_width, v.t_min(), v.t_max(), cfg.diagnostics_seed, margin);
    const std::vector<LocalEnergyTestCase> cases = local_energy_battery(v, bumps, nullptr, threads);
    double min_rel = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cases.size(); ++i) {
      char key[64];
      std::snprintf(key, sizeof key, "diag.local.bump_%02zu.", i);
      const double denom = std::abs(cases[i].lhs) + std::abs(cases[i].rhs) + 1e-300;
      const double rel = cases[i].slack / denom;
      rep.add(std::string(key) + "lhs", cases[i].lhs);
      rep.add(std::string(key) + "rhs", cases[i].rhs);
      rep.add(std::string(key) + "slack", cases[i].slack);
      rep.add(std::string(key) + "rel", rel);
      min_rel = std::min(min_rel, rel);
    }
    rep.add("diag.local.count", int(cases.size()));
    rep.add("diag.local.min_rel_slack", min_rel);
  }

  if (cfg.diagnostics_apriori) {
    const double L = first.values.grid().half_width;
    const double radii[3] = {0.25 * L, 0.5 * L, L};
    for (int i = 0; i < 3; ++i) {
      char key[48];
      std::snprintf(key, sizeof key, "diag.apriori.r%d.", i + 1);
      const std::string p(key);
      const AprioriBoundReport strict = apriori_bound_check(v, first.values, radii[i]);
      rep.add(p + "radius", strict.r);
      rep.add(p + "a_r", strict.a_r);
      rep.add(p + "sigma", strict.sigma);
      rep.add(p + "ratio", strict.ratio);
      rep.add(p + "truncated", strict.truncated);
      // Same quantity with the horizon pushed past the stored range, so the
      // whole range enters the measured side.
      const AprioriBoundReport full = apriori_bound_check(v, first.values, radii[i], 1e9);
      rep.add(p + "full_measured", full.measured);
      rep.add(p + "full_ratio", full.ratio);
    }
  }

  if (cfg.diagnostics_rate_fits) {
    // a-part decay against the heat evolution of its own initial slice,
    // measured in L2 on a fixed ball; the construction promises exponent
    // >= 1/4 for the gap.
    const PhysicalField a_phys = from_profile(rolled);
    const VectorField base0 = rolled.velocity(0);
    PhysicalField baseline;
    for (int j = 0; j < rolled.n_nodes(); ++j) {
      const double t = std::exp(rolled.s_node(j));
      baseline.add_slice(t, SliceFrame{1.0, 0.0}, heat_evolve(base0, t - 1.0));
    }
    const RateFit fit = difference_rate_fit(a_phys, baseline, 2.0, 0.25);
    rep.add("diag.rate.a.exponent", fit.exponent);
    rep.add("diag.rate.a.amplitude", fit.amplitude);
    rep.add("diag.rate.a.passed", fit.passed);
    rep.add("diag.rate.a.inconclusive", fit.inconclusive);
  }
}

// Everything the solve pipeline accumulates before the Galerkin stage. The
// sweep reuses the prefix stages once per run (or per level on the grid
// axis).
struct SolveContext {
  RunConfig cfg;
  SymmetrySpec spec;
  FundamentalData data;
  BoxGrid grid{2, 1.0};
  double T = 0.0;
  VectorField v0;
  FundamentalData a0, b0;
  bool split_skipped = false;
  double b0_besov = 0.0;
  MildResult mild;
  ProfileTrajectory U0;
  BackgroundResult W;

  explicit SolveContext(const RunConfig& c) : cfg(c) {}

  void prepare_data(Report& rep) {
    spec = config_symmetry(cfg);
    grid = BoxGrid(cfg.grid_n, cfg.grid_half_width);
    T = spec.period();
    try {
      make_basis(grid, cfg.galerkin_modes);
    } catch (const std::exception& e) {
      throw ConfigError(0, "galerkin.modes", e.what());
    }
    data = make_data(cfg, spec);
    v0 = extend_from_fundamental_domain(data, grid);
    rep.add("data.max_sample_magnitude", data.max_sample_magnitude());
    rep.add("data.l2", lp_norm(v0, 2.0));
    rep.add("data.period", T);
  }

  void prepare_split(Report& rep) {
    const BesovParams bp = besov_params_for(cfg);
    const double eps = cfg.effective_epsilon();
    b0_besov = besov_norm(v0, bp);
    bool do_split;
    if (cfg.split_mode == "skip") do_split = false;
    else if (cfg.split_mode == "force") do_split = true;
    else do_split = b0_besov > eps;
    rep.add("split.epsilon", eps);
    rep.add("split.data_besov", b0_besov);
    if (!do_split) {
      // The whole datum rides the small-data path; the bounded part is zero.
      split_skipped = true;
      a0 = FundamentalData::from_function(spec, data.ntheta(), data.nphi(), data.nr(),
                                          [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; });
      b0 = data;
      rep.add("split.skipped", true);
      rep.add("split.cut_level", 0.0);
      rep.add("split.b0_besov", b0_besov);
      rep.add("split.a0_weak_l3", 0.0);
      rep.add("split.reached", true);
      if (cfg.split_mode != "skip" && b0_besov > eps)
        throw std::runtime_error("datum above the threshold with splitting disabled");
      return;
    }
    SplitResult split = split_initial_data(data, eps, bp, grid);
    a0 = split.bounded;
    b0 = split.excess;
    rep.add("split.skipped", false);
    rep.add("split.cut_level", split.cut_level);
    rep.add("split.b0_besov", split.excess_besov);
    rep.add("split.a0_weak_l3", split.bounded_weak_l3);
    rep.add("split.reached", split.reached);
    if (!split.reached)
      throw std::runtime_error("splitting left Besov norm " + fmt(split.excess_besov) +
                               " above the threshold " + fmt(eps));
  }

  void prepare_mild(Report& rep) {
    MildParams mp;
    mp.n_times = cfg.mild_n_times;
    mp.panels = cfg.mild_panels;
    mp.max_iterations = cfg.mild_max_iterations;
    mp.tolerance = cfg.mild_tolerance;
    mp.decay_p = cfg.split_p;
    mild = solve_mild_cell(b0, grid, grid, mp);
    rep.add("mild.converged", mild.converged);
    rep.add("mild.iterations", mild.iterations);
    rep.add("mild.last_update", mild.last_update);
    rep.add("mild.contraction", mild.contraction);
    rep.add("mild.decay_rate", mild.decay_rate);
    rep.add("mild.decay_target", mild.decay_target);
    if (!mild.converged)
      throw std::runtime_error("mild iteration stalled at relative update " +
                               fmt(mild.last_update));
  }

  void prepare_background(Report& rep) {
    std::vector<double> s_nodes;
    for (int j = 0; j < cfg.galerkin_s_nodes; ++j)
      s_nodes.push_back(T * double(j) / double(cfg.galerkin_s_nodes));
    U0 = build_U0(a0, grid, s_nodes);
    W = build_W(U0, cfg.background_alpha_bound, cfg.background_q);
    rep.add("background.r0", W.r0);
    rep.add("background.achieved", W.achieved);
    rep.add("background.alpha_bound", W.alpha_bound);
    rep.add("background.q", W.q);
    rep.add("background.max_divergence", W.max_divergence);
    rep.add("background.reached", W.reached);
    if (!W.reached)
      throw std::runtime_error("background norm " + fmt(W.achieved) +
                               " exceeds the bound " + fmt(W.alpha_bound) +
                               " on every cutoff radius");
  }
};

struct GalerkinLevel {
  Basis basis;
  GalerkinState gs;
  ProfileTrajectory U;
};

GalerkinLevel run_galerkin(const SolveContext& c, int modes, double mollification) {
  GalerkinLevel lv;
  lv.basis = make_basis(c.grid, modes);
  TensorOptions topt;
  topt.alpha = c.spec.alpha;
  topt.n_s = c.cfg.galerkin_s_nodes;
  const GalerkinTensors tns =
      assemble_tensors(lv.basis, &c.W.w, &c.mild.profile, mollification, topt);
  GalerkinParams gp;
  gp.dt = c.cfg.galerkin_dt;
  gp.fp_tol = c.cfg.solver_tol;
  gp.fp_max_iter = c.cfg.solver_max_iterations;
  gp.rho = c.cfg.galerkin_rho;
  gp.fp_damping = c.cfg.solver_damping;
  lv.gs = solve_periodic_galerkin(lv.basis, tns, c.T, gp);
  lv.U = galerkin_profile(lv.basis, lv.gs.coeffs, c.spec.alpha, c.T);
  return lv;
}

void add_galerkin_entries(Report& rep, const std::string& prefix, const GalerkinState& gs) {
  rep.add(prefix + "modes", gs.k);
  rep.add(prefix + "mollification", gs.eps);
  rep.add(prefix + "dt", gs.dt);
  rep.add(prefix + "fp_residual", gs.fp.residual);
  rep.add(prefix + "fp_iterations", gs.fp.iterations);
  rep.add(prefix + "fp_converged", gs.fp.converged);
  rep.add(prefix + "rho", gs.fp.rho);
  rep.add(prefix + "ball_certified", gs.fp.ball_certified);
  rep.add(prefix + "energy_linf", gs.energy_linf);
  rep.add(prefix + "energy_l2h1", gs.energy_l2h1);
  rep.add(prefix + "combined_norm", gs.combined_norm);
}

// Failure epilogue shared by the commands: record the failure, write the
// report files that exist so far, and map the exception to an exit code.
int finish_failure(Report& rep, StageTimings& tm, const std::string& out_dir,
                   const std::string& kv_name, const std::string& txt_name,
                   const std::string& title, const std::string& timings_name,
                   std::exception_ptr err) {
  int code = kExitStage;
  try {
    std::rethrow_exception(err);
  } catch (const ConfigError& e) {
    code = kExitConfig;
    rep.add("failed.stage", "config");
    rep.add("failed.message", e.what());
  } catch (const IntegrityError& e) {
    code = kExitIntegrity;
    rep.add("failed.stage", "artifacts");
    rep.add("failed.message", e.what());
  } catch (const StageError& e) {
    code = kExitStage;
    rep.add("failed.stage", e.stage());
    rep.add("failed.message", e.what());
  } catch (const std::exception& e) {
    code = kExitStage;
    rep.add("failed.stage", "unknown");
    rep.add("failed.message", e.what());
  }
  std::error_code ignore;
  fs::create_directories(out_dir, ignore);
  try {
    rep.write_machine(out_dir + "/" + kv_name);
    rep.write_human(out_dir + "/" + txt_name, title);
    tm.write(out_dir + "/" + timings_name);
  } catch (const std::exception&) {
    // Reporting must not mask the original failure.
  }
  return code;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LPRF_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

int cmd_analyze(const RunConfig& cfg, const std::string& out_dir, Report* out) {
  Report rep;
  StageTimings tm;
  StageRunner stages(tm);
  try {
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/config.echo", config_echo(cfg));
    set_thread_count(resolve_threads(cfg.run_threads));

    SolveContext c(cfg);
    stages.run("data", [&] { c.prepare_data(rep); });

    stages.run("norms", [&] {
      const NormReport nr = norm_report(c.v0, besov_params_for(cfg));
      rep.add("analyze.weak_l3", nr.weak_l3);
      rep.add("analyze.l2_uloc", nr.l2_uloc);
      rep.add("analyze.besov", nr.besov);
      rep.add("analyze.besov_s", nr.besov_params.s);
      rep.add("analyze.besov_p", nr.besov_params.p);
      rep.add("analyze.besov_lambda", nr.besov_params.lambda);
      for (const auto& [j, mag] : nr.block_magnitudes) {
        char key[48];
        std::snprintf(key, sizeof key, "analyze.band_%d", j);
        rep.add(key, mag);
      }
    });

    stages.run("symmetry", [&] {
      rep.add("analyze.symmetry_defect", symmetry_defect(c.v0, c.spec));
    });

    stages.run("divergence", [&] {
      // Finite-difference divergence over an interior shell, scaled by the
      // mean shell radius to make it dimensionless against the L2 norm.
      const double L = c.grid.half_width;
      const RegionPredicate sh = shell(0.25 * L, 0.8 * L);
      const double rel = lp_norm(fd_divergence(c.v0), 2.0, sh) * (0.525 * L) /
                         (lp_norm(c.v0, 2.0, sh) + 1e-300);
      rep.add("analyze.divergence_rel", rel);
      rep.add("analyze.divergence_free", rel <= cfg.diagnostics_div_tol);
    });
  } catch (...) {
    return finish_failure(rep, tm, out_dir, "report.kv", "report.txt", "data analysis",
                          "timings.txt", std::current_exception());
  }
  rep.write_machine(out_dir + "/report.kv");
  rep.write_human(out_dir + "/report.txt", "data analysis");
  tm.write(out_dir + "/timings.txt");
  if (out) *out = rep;
  return kExitSuccess;
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir, Report* out) {
  Report rep;
  StageTimings tm;
  StageRunner stages(tm);
  const std::string fdir = out_dir + "/fields";
  try {
    fs::create_directories(fdir);
    write_text_file(out_dir + "/config.echo", config_echo(cfg));
    const int threads = resolve_threads(cfg.run_threads);
    set_thread_count(threads);

    SolveContext c(cfg);
    ComposedSolution sol;

    stages.run("data", [&] {
      c.prepare_data(rep);
      write_vector_field(fdir + "/v0.lprf", c.v0);
    });

    stages.run("split", [&] {
      c.prepare_split(rep);
      write_vector_field(fdir + "/a0.lprf", extend_from_fundamental_domain(c.a0, c.grid));
      write_vector_field(fdir + "/b0.lprf", extend_from_fundamental_domain(c.b0, c.grid));
    });

    stages.run("mild", [&] {
      c.prepare_mild(rep);
      write_trajectory(fdir, "B", c.mild.profile);
      write_physical_field(fdir, "b", c.mild.b);
    });

    stages.run("background", [&] {
      c.prepare_background(rep);
      write_trajectory(fdir, "U0", c.U0);
      write_trajectory(fdir, "W", c.W.w);
    });

    GalerkinLevel lv;
    stages.run("galerkin", [&] {
      lv = run_galerkin(c, cfg.galerkin_modes, cfg.galerkin_mollification);
      add_galerkin_entries(rep, "galerkin.", lv.gs);
      if (!lv.gs.fp.converged)
        throw std::runtime_error("period map fixed point stalled at residual " +
                                 fmt(lv.gs.fp.residual));
    });

    stages.run("compose", [&] {
      sol = compose_solution(lv.U, c.W.w, c.mild.profile, c.mild.b);
      rep.add("compose.momentum_residual_max", sol.residual.max_momentum_l2);
      rep.add("compose.divergence_max", sol.residual.max_divergence_l2);
      write_trajectory(fdir, "A", sol.A);
      write_physical_field(fdir, "v", sol.v);
    });

    stages.run("diagnostics", [&] {
      diagnostics_section(rep, cfg, c.v0, sol.A, sol.v, threads);
    });
  } catch (...) {
    return finish_failure(rep, tm, out_dir, "report.kv", "report.txt", "solution report",
                          "timings.txt", std::current_exception());
  }
  rep.write_machine(out_dir + "/report.kv");
  rep.write_human(out_dir + "/report.txt", "solution report");
  tm.write(out_dir + "/timings.txt");
  if (out) *out = rep;
  return kExitSuccess;
}

int cmd_verify(const std::string& run_dir, Report* out) {
  Report rep;
  StageTimings tm;
  StageRunner stages(tm);
  try {
    const std::string echo_path = run_dir + "/config.echo";
    if (!fs::exists(echo_path)) throw IntegrityError(echo_path, "missing config echo");
    RunConfig cfg;
    try {
      cfg = load_config(echo_path);
    } catch (const ConfigError& e) {
      throw IntegrityError(echo_path, e.what());
    }
    const std::string fdir = run_dir + "/fields";

    VectorField v0;
    ProfileTrajectory A;
    PhysicalField v;
    stages.run("read", [&] {
      v0 = read_vector_field(fdir + "/v0.lprf");
      A = read_trajectory(fdir, "A");
      v = read_physical_field(fdir, "v");
      const BoxGrid& g = v0.grid();
      if (A.grid().n != g.n || A.grid().half_width != g.half_width)
        throw IntegrityError(fdir, "grid mismatch between v0 and A");
      if (v.empty() || v.slice(0).values.grid().n != g.n)
        throw IntegrityError(fdir, "grid mismatch between v0 and v");
      rep.add("verify.slices", v.n_slices());
      rep.add("verify.trajectory_nodes", A.n_nodes());
    });

    stages.run("diagnostics", [&] {
      diagnostics_section(rep, cfg, v0, A, v, resolve_threads(cfg.run_threads));
    });

    rep.write_machine(run_dir + "/verify.kv");
    rep.write_human(run_dir + "/verify.txt", "verification report");
    tm.write(run_dir + "/verify_timings.txt");
  } catch (...) {
    return finish_failure(rep, tm, run_dir, "verify.kv", "verify.txt", "verification report",
                          "verify_timings.txt", std::current_exception());
  }
  if (out) *out = rep;
  return kExitSuccess;
}

int cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::vector<double>& values,
              const std::string& out_dir, Report* out) {
  Report rep;
  StageTimings tm;
  StageRunner stages(tm);
  try {
    if (axis != "modes" && axis != "mollification" && axis != "grid")
      throw ConfigError(0, "sweep.axis", "unknown axis '" + axis + "'");
    if (values.size() < 3)
      throw ConfigError(0, "sweep.values", "need at least 3 levels, got " +
                                               std::to_string(values.size()));
    for (double v : values) {
      if (!(v > 0.0)) throw ConfigError(0, "sweep.values", "levels must be positive");
      if (axis != "mollification" && v != std::floor(v))
        throw ConfigError(0, "sweep.values", "'" + axis + "' levels must be integers");
    }
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/config.echo", config_echo(cfg));
    set_thread_count(resolve_threads(cfg.run_threads));
    rep.add("sweep.axis", axis);
    rep.add("sweep.levels", int(values.size()));

    // The prefix stages do not depend on the modes / mollification axes, so
    // those sweeps share one preparation; the grid axis redoes it per level.
    SolveContext shared(cfg);
    if (axis != "grid") {
      stages.run("data", [&] { shared.prepare_data(rep); });
      stages.run("split", [&] { shared.prepare_split(rep); });
      stages.run("mild", [&] { shared.prepare_mild(rep); });
      stages.run("background", [&] { shared.prepare_background(rep); });
    }

    std::vector<std::string> rows;
    ProfileTrajectory prev_u;
    bool have_prev = false;
    for (std::size_t li = 0; li < values.size(); ++li) {
      char label[32];
      std::snprintf(label, sizeof label, "sweep.level_%02zu.", li);
      const std::string lp(label);
      rep.add(lp + "value", values[li]);
      std::ostringstream row;
      row << axis << "," << fmt(values[li]) << ",";
      try {
        GalerkinLevel lv;
        if (axis == "grid") {
          RunConfig level_cfg = cfg;
          level_cfg.grid_n = int(values[li]);
          Report scratch;  // per-level prefix entries would collide; drop them
          SolveContext local(level_cfg);
          local.prepare_data(scratch);
          local.prepare_split(scratch);
          local.prepare_mild(scratch);
          local.prepare_background(scratch);
          lv = run_galerkin(local, cfg.galerkin_modes, cfg.galerkin_mollification);
        } else if (axis == "modes") {
          lv = run_galerkin(shared, int(values[li]), cfg.galerkin_mollification);
        } else {
          lv = run_galerkin(shared, cfg.galerkin_modes, values[li]);
        }
        double cauchy = 0.0;
        if (have_prev) cauchy = field_l2_difference(prev_u.velocity(0), lv.U.velocity(0));
        row << "ok," << fmt(lv.gs.combined_norm) << "," << fmt(lv.gs.energy_linf) << ","
            << fmt(lv.gs.energy_l2h1) << "," << fmt(lv.gs.fp.residual) << ","
            << (lv.gs.fp.converged ? "1" : "0") << ","
            << (have_prev ? fmt(cauchy) : std::string());
        rep.add(lp + "status", "ok");
        add_galerkin_entries(rep, lp, lv.gs);
        if (have_prev) rep.add(lp + "cauchy", cauchy);
        prev_u = lv.U;
        have_prev = true;
      } catch (const std::exception& e) {
        // A failed level is recorded and the sweep moves on; the next good
        // level compares against the last good one.
        row << "failed,,,,,,";
        rep.add(lp + "status", "failed");
        rep.add(lp + "message", e.what());
      }
      rows.push_back(row.str());
    }

    std::ostringstream csv;
    csv << "axis,value,status,combined_norm,energy_linf,energy_l2h1,fp_residual,"
           "fp_converged,cauchy\n";
    for (const std::string& r : rows) csv << r << "\n";
    write_text_file(out_dir + "/sweep.csv", csv.str());
  } catch (...) {
    return finish_failure(rep, tm, out_dir, "report.kv", "report.txt", "discretization sweep",
                          "timings.txt", std::current_exception());
  }
  rep.write_machine(out_dir + "/report.kv");
  rep.write_human(out_dir + "/report.txt", "discretization sweep");
  tm.write(out_dir + "/timings.txt");
  if (out) *out = rep;
  return kExitSuccess;
}

}  // namespace lprf
