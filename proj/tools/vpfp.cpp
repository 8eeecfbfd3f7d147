// Command-line front end: equilibrium | run | sweep | asymptotics | diagnose.
// Exit codes: 0 success, 1 config error, 2 numerical abort, 3 diagnose failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vpfp/config.hpp"
#include "vpfp/diagnostics.hpp"
#include "vpfp/output.hpp"
#include "vpfp/sweep.hpp"

namespace fs = std::filesystem;
using namespace vpfp;

namespace {

double wall_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int worker_count() {
  if (const char* env = std::getenv("VPFP_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

StateSeries load_frozen_source(const std::string& dir) {
  std::ifstream idx(dir + "/index.txt");
  if (!idx) throw ConfigError("cannot open frozen source index " + dir + "/index.txt");
  StateSeries ss;
  double t;
  std::string name;
  while (idx >> t >> name) {
    ss.times.push_back(t);
    ss.states.push_back(read_state(dir + "/" + name));
  }
  if (ss.states.empty()) throw ConfigError("frozen source " + dir + " is empty");
  return ss;
}

void save_state_series(const std::string& dir, const Trajectory& traj) {
  fs::create_directories(dir);
  std::ofstream idx(dir + "/index.txt");
  for (size_t k = 0; k < traj.states.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "state_%05zu.txt", k);
    write_state(dir + "/" + std::string(name), traj.states[k]);
    char tbuf[32];
    std::snprintf(tbuf, sizeof(tbuf), "%.17g", traj.times[k]);
    idx << tbuf << " " << name << "\n";
  }
}

int cmd_equilibrium(const RunSetup& setup, std::chrono::steady_clock::time_point t0) {
  SpectralGrid grid(setup.disc.n_x);
  DensityField rs = DensityField::validated(setup.rho_star);
  Equilibrium eq = solve_poisson_boltzmann(grid, rs, setup.solver.delta, setup.pb);
  fs::create_directories(setup.out_dir);
  const std::string phi_path = setup.out_dir + "/" + setup.prefix + "_phi.txt";
  write_grid_file(phi_path, eq.phi);

  BoundsReport rep = verify_equilibrium_bounds(eq, rs, setup.p_list);
  const std::string rep_path = setup.out_dir + "/" + setup.prefix + "_equilibrium.json";
  {
    std::ofstream out(rep_path);
    out << "{\n  \"delta\": " << eq.delta << ",\n";
    out << "  \"mass\": " << grid_mean(eq.rho) << ",\n";
    out << "  \"grad_energy\": " << rep.grad_energy << ",\n";
    out << "  \"mean_abs\": " << rep.mean_abs << ",\n  \"lp_bounds\": [\n";
    for (size_t i = 0; i < rep.lp.size(); ++i) {
      const LpBound& b = rep.lp[i];
      out << "    {\"p\": " << b.p << ", \"lhs\": " << b.lhs << ", \"rhs\": " << b.rhs
          << ", \"holds\": " << (b.holds ? "true" : "false") << "}"
          << (i + 1 < rep.lp.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
  }
  std::printf("equilibrium: residual converged, mass = %.12g, outputs %s %s (%.2fs)\n",
              grid_mean(eq.rho), phi_path.c_str(), rep_path.c_str(), wall_seconds(t0));
  for (const LpBound& b : rep.lp)
    std::printf("  L^%-4g bound: %.9g <= %.9g  %s\n", b.p, b.lhs, b.rhs,
                b.holds ? "holds" : "VIOLATED");
  return 0;
}

int cmd_run(const RunSetup& setup, std::chrono::steady_clock::time_point t0) {
  Space sp(setup.disc);
  DensityField rs = DensityField::validated(setup.rho_star);
  Equilibrium eq = solve_poisson_boltzmann(sp.grid(), rs, setup.solver.delta, setup.pb);

  SolverConfig cfg = setup.solver;
  cfg.record_states = setup.save_states;
  StateSeries frozen;
  if (cfg.mode == RunMode::frozen) {
    frozen = load_frozen_source(setup.frozen_source_dir);
    cfg.frozen_source = &frozen;
  }

  SpectralState h0 = make_initial_data(sp, setup.init, eq);
  SpectralState final_state;
  double tail_max = 0.0;
  SampleObserver track = [&](double, const SpectralState& h, const FunctionalSample& smp) {
    if (smp.h2 > 0.0) tail_max = std::max(tail_max, tail_mass_fraction(sp, h, eq));
    if (setup.macro_snapshot) final_state = h;
    return true;
  };
  Trajectory traj = run(sp, h0, cfg, eq, track);

  fs::create_directories(setup.out_dir);
  const std::string csv = setup.out_dir + "/" + setup.prefix + "_samples.csv";
  write_samples_csv(csv, traj.samples);
  RunSummary s;
  s.tau = cfg.tau;
  s.delta = cfg.delta;
  const FunctionalSample& last = traj.samples.back();
  s.final_norm_h = std::sqrt(std::max(0.0, last.h2));
  s.final_field_energy = last.field_energy;
  for (double m : traj.conserved)
    s.mass_drift_max = std::max(s.mass_drift_max, std::abs(m - traj.conserved.front()));
  s.kappa_min = min_dissipation_ratio(traj.samples, cfg.hypo, cfg.tau);
  s.tail_mass_frac_max = tail_max;
  s.manifest.config_hash = setup.config_hash;
  s.manifest.seed = setup.init.seed;
  s.manifest.version = version_string();
  s.manifest.outputs = {csv};
  std::vector<double> norms;
  bool positive = true;
  for (const FunctionalSample& smp : traj.samples) {
    const double v = std::sqrt(std::max(0.0, smp.h2));
    positive = positive && v > 0.0;
    norms.push_back(v);
  }
  if (positive && traj.times.size() >= 8) {
    try {
      s.rate = fit_decay_rate(traj.times, norms, std::max(cfg.tau, 0.1 * cfg.t_end), cfg.t_end);
      s.rate_valid = true;
    } catch (const Error&) {
    }
  }
  if (setup.save_states) {
    const std::string sdir = setup.out_dir + "/" + setup.prefix + "_states";
    save_state_series(sdir, traj);
    s.manifest.outputs.push_back(sdir);
  }
  if (setup.macro_snapshot) {
    MacroFields mf = compute_macro(sp, final_state, eq);
    const std::string mcsv = setup.out_dir + "/" + setup.prefix + "_final_macro.csv";
    write_macro_csv(mcsv, mf);
    s.manifest.outputs.push_back(mcsv);
  }
  if (setup.plot_script) {
    const std::string plt = setup.out_dir + "/" + setup.prefix + "_samples.plt";
    write_plot_script(plt, setup.prefix + "_samples.csv");
    s.manifest.outputs.push_back(plt);
  }
  s.manifest.wall_time_s = wall_seconds(t0);
  const std::string js = setup.out_dir + "/" + setup.prefix + "_summary.json";
  write_summary_json(js, s);
  std::printf("run: %zu samples, final ||h|| = %.9g, mass drift %.3g -> %s (%.2fs)\n",
              traj.samples.size(), s.final_norm_h, s.mass_drift_max, csv.c_str(),
              s.manifest.wall_time_s);
  return 0;
}

int cmd_sweep(const RunSetup& setup, std::chrono::steady_clock::time_point t0) {
  std::vector<SweepCell> rows = run_sweep(setup, setup.out_dir);
  int ok = 0;
  for (const SweepCell& r : rows) ok += r.status == "ok";
  std::printf("sweep: %zu cells (%d ok) with %d workers -> %s/%s_sweep.csv (%.2fs)\n",
              rows.size(), ok, worker_count(), setup.out_dir.c_str(), setup.prefix.c_str(),
              wall_seconds(t0));
  return 0;
}

int cmd_asymptotics(const RunSetup& setup, std::chrono::steady_clock::time_point t0) {
  if (!setup.regime_configured)
    throw ConfigError("asymptotics needs the asym.* config block (asym.regime, asym.tau_list)");
  RegimeReport rep = run_regime_study(setup.regime);
  fs::create_directories(setup.out_dir);
  const std::string js = setup.out_dir + "/" + setup.prefix + "_regime.json";
  write_regime_json(js, rep);
  std::printf("asymptotics: regime %d, rule %s, order %.3f (r2 %.4f), monotone %s -> %s (%.2fs)\n",
              rep.regime, rep.rule.c_str(), rep.order, rep.r_squared,
              rep.monotone ? "yes" : "no", js.c_str(), wall_seconds(t0));
  return 0;
}

int cmd_diagnose(const RunSetup& setup, std::chrono::steady_clock::time_point t0) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, double value, double bound) {
    std::printf("[%s] %-42s %.3e (bound %.1e)\n", ok ? "PASS" : "FAIL", name, value, bound);
    if (!ok) ++failures;
  };

  Discretization disc = setup.disc;
  Space sp(disc);
  ScalarField rho(disc.n_x);
  for (int i1 = 0; i1 < disc.n_x; ++i1)
    for (int i2 = 0; i2 < disc.n_x; ++i2)
      rho(i1, i2) = 1.0 + 0.3 * std::cos(2.0 * M_PI * i1 / disc.n_x);
  DensityField rs = DensityField::validated(rho);
  Equilibrium eq = solve_poisson_boltzmann(sp.grid(), rs, 1.0, setup.pb);

  {
    ScalarField F = sp.grid().laplacian(eq.phi);
    for (size_t i = 0; i < F.size(); ++i) F.v[i] = -F.v[i] - eq.rho.v[i] + rho.v[i];
    report("poisson_boltzmann_residual", grid_l2(F) <= setup.pb.tol, grid_l2(F), setup.pb.tol);
    report("emergent_normalization", std::abs(grid_mean(eq.rho) - 1.0) <= 10 * setup.pb.tol,
           std::abs(grid_mean(eq.rho) - 1.0), 10 * setup.pb.tol);
  }

  const int band = disc.n_x / 3 - 1;
  InitialDataSpec ids;
  ids.spatial_band = std::min(4, band);
  ids.hermite_band = disc.n_v - 2;
  double worst_comm = 0, worst_skew = 0, worst_fp = 0, worst_adj = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ids.seed = 1000 + trial;
    SpectralState h = make_initial_data(sp, ids, eq);
    const double hn = norm_h(sp, h, eq);

    // [A,B] = C
    StatePair Ch = apply_C(sp, h);
    StatePair Ah = apply_A(h);
    SpectralState Bh = apply_B(sp, h, eq);
    StatePair ABh = apply_A(Bh);
    for (int i = 0; i < 2; ++i) {
      SpectralState comm = ABh[i];
      comm -= apply_B(sp, Ah[i], eq);
      comm -= Ch[i];
      worst_comm = std::max(worst_comm, norm_h(sp, comm, eq) / hn);
    }
    // skew symmetry
    worst_skew = std::max(worst_skew, std::abs(inner_product(sp, Bh, h, eq)) /
                                          (hn * norm_h(sp, Bh, eq) + 1e-300));
    // ||A*.Ah||^2 = ||Ah||^2 + ||A^2 h||^2
    NormsBundle nb = norms_bundle(sp, h, eq);
    worst_fp = std::max(worst_fp, std::abs(nb.AsAh2 - nb.Ah2 - nb.A2h2) /
                                      (nb.AsAh2 + 1e-300));
    // adjointness on a second state
    ids.seed += 500;
    SpectralState g = make_initial_data(sp, ids, eq);
    StatePair Ag = apply_A(g);
    StatePair Ash = apply_Astar(h);
    for (int i = 0; i < 2; ++i) {
      const double lhs = inner_product(sp, Ag[i], h, eq);
      const double rhs = inner_product(sp, g, Ash[i], eq);
      worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / (std::abs(lhs) + 1e-300));
    }
  }
  report("commutator_[A,B]=C", worst_comm <= 1e-9, worst_comm, 1e-9);
  report("skew_symmetry_<Bh,h>", worst_skew <= 1e-9, worst_skew, 1e-9);
  report("fp_identity_AsA", worst_fp <= 1e-9, worst_fp, 1e-9);
  report("ladder_adjointness", worst_adj <= 1e-10, worst_adj, 1e-10);

  // energy identity residual, small linear run
  {
    SolverConfig cfg;
    cfg.tau = 0.5;
    cfg.delta = 10.0;
    cfg.t_end = 0.2;
    cfg.dt = 1e-3;
    cfg.mode = RunMode::linear_vfp;
    cfg.record_every = 5;
    cfg.record_states = true;
    InitialDataSpec i2 = ids;
    i2.seed = 7;
    i2.spatial_band = 2;   // keep truncation leakage below the dt^2 signal
    i2.hermite_band = 2;
    SpectralState h0 = make_initial_data(sp, i2, eq);
    Trajectory traj = run(sp, h0, cfg, eq);
    ResidualSeries rs2 = energy_identity_residuals(sp, traj, eq, cfg);
    double worst = 0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, rs2.max_rel[i]);
    report("energy_identity_residual(linear)", worst <= 5e-3, worst, 5e-3);
  }

  std::printf("diagnose: %d failure(s) (%.2fs)\n", failures, wall_seconds(t0));
  return failures == 0 ? 0 : 3;
}

void usage() {
  std::fprintf(stderr,
               "usage: vpfp <equilibrium|run|sweep|asymptotics|diagnose> <config-file>\n"
               "       vpfp diagnose            (built-in defaults)\n");
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = std::chrono::steady_clock::now();
  if (argc < 2) {
    usage();
    return 1;
  }
  const std::string cmd = argv[1];
  try {
    RunSetup setup;
    if (argc >= 3) {
      setup = load_run_setup_file(argv[2]);
      std::printf("%s", setup.echo().c_str());
    } else if (cmd != "diagnose") {
      usage();
      return 1;
    } else {
      setup = load_run_setup(ConfigMap::from_string(""));
    }
    if (cmd == "equilibrium") return cmd_equilibrium(setup, t0);
    if (cmd == "run") return cmd_run(setup, t0);
    if (cmd == "sweep") return cmd_sweep(setup, t0);
    if (cmd == "asymptotics") return cmd_asymptotics(setup, t0);
    if (cmd == "diagnose") return cmd_diagnose(setup, t0);
    usage();
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const NumericsError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
