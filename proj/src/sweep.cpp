#include "vpfp/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vpfp/diagnostics.hpp"

namespace vpfp {

namespace {

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

std::string cell_tag(double tau, double delta, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "tau%g_delta%g_seed%llu", tau, delta,
                static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace

std::vector<SweepCell> run_sweep(const RunSetup& setup, const std::string& out_dir) {
  struct Cell {
    double tau, delta;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double tau : setup.sweep_tau)
    for (double delta : setup.sweep_delta)
      for (std::uint64_t seed : setup.sweep_seeds) cells.push_back({tau, delta, seed});

  std::filesystem::create_directories(out_dir);
  std::vector<SweepCell> rows(cells.size());

  [[maybe_unused]] const int W = worker_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(W)
#endif
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
    const Cell& cell = cells[static_cast<size_t>(c)];
    SweepCell row;
    row.tau = cell.tau;
    row.delta = cell.delta;
    row.seed = cell.seed;
    try {
      Space sp(setup.disc);
      DensityField rs = DensityField::validated(setup.rho_star);
      Equilibrium eq = solve_poisson_boltzmann(sp.grid(), rs, cell.delta, setup.pb);
      SolverConfig cfg = setup.solver;
      cfg.tau = cell.tau;
      cfg.delta = cell.delta;
      InitialDataSpec init = setup.init;
      init.seed = cell.seed;
      SpectralState h0 = make_initial_data(sp, init, eq);
      Trajectory traj = run(sp, h0, cfg, eq);

      const std::string csv = out_dir + "/" + setup.prefix + "_" +
                              cell_tag(cell.tau, cell.delta, cell.seed) + ".csv";
      write_samples_csv(csv, traj.samples);
      row.status = "ok";
      row.final_norm_h = std::sqrt(std::max(0.0, traj.samples.back().h2));
      for (double m : traj.conserved)
        row.mass_drift_max = std::max(row.mass_drift_max, std::abs(m - traj.conserved.front()));
      std::vector<double> norms;
      bool positive = true;
      for (const FunctionalSample& smp : traj.samples) {
        const double v = std::sqrt(std::max(0.0, smp.h2));
        positive = positive && v > 0.0;
        norms.push_back(v);
      }
      if (positive && traj.times.size() >= 8) {
        try {
          RateFit fit =
              fit_decay_rate(traj.times, norms, std::max(cfg.tau, 0.1 * cfg.t_end), cfg.t_end);
          row.fitted_rate = fit.rate;
          row.r_squared = fit.r_squared;
        } catch (const Error&) {
        }
      }
    } catch (const NumericsError& e) {
      row.status = "numerical_abort";
      std::fprintf(stderr, "sweep cell %s: %s\n",
                   cell_tag(cell.tau, cell.delta, cell.seed).c_str(), e.what());
    } catch (const Error& e) {
      row.status = "error";
      std::fprintf(stderr, "sweep cell %s: %s\n",
                   cell_tag(cell.tau, cell.delta, cell.seed).c_str(), e.what());
    }
    rows[static_cast<size_t>(c)] = row;
  }

  write_sweep_csv(out_dir + "/" + setup.prefix + "_sweep.csv", rows);
  return rows;
}

}  // namespace vpfp
