#include <doctest.h>

#include <cmath>

#include "vpfp/asymptotics.hpp"
#include "vpfp/diagnostics.hpp"

using namespace vpfp;

namespace {

Discretization disc(int n_x = 16, int n_v = 6) {
  Discretization d;
  d.n_x = n_x;
  d.n_v = n_v;
  return d;
}

Equilibrium cos_equilibrium(const SpectralGrid& grid, int n, double eps, double delta) {
  ScalarField rho(n);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      rho(i1, i2) = 1.0 + eps * std::cos(2.0 * M_PI * i1 / static_cast<double>(n));
  return solve_poisson_boltzmann(grid, DensityField::validated(rho), delta);
}

}  // namespace

TEST_CASE("t_ref rules") {
  CHECK(TimeRefRule::parse("inv_tau").t_ref(0.1) == doctest::Approx(10.0));
  CHECK(TimeRefRule::parse("tau").t_ref(0.1) == doctest::Approx(0.1));
  CHECK(TimeRefRule::parse("power:2").t_ref(0.1) == doctest::Approx(0.01));
  CHECK(TimeRefRule::parse("fixed:3").t_ref(0.1) == doctest::Approx(3.0));
  CHECK_THROWS_AS(TimeRefRule::parse("bogus"), ConfigError);
  CHECK(TimeRefRule::for_regime(3).t_ref(0.05) == doctest::Approx(1.0));
  CHECK(TimeRefRule::for_regime(5).t_ref(0.1) == doctest::Approx(0.01));
}

TEST_CASE("drift-diffusion conserves mass and holds the Boltzmann steady state") {
  const int n = 32;
  SpectralGrid grid(n);
  const double delta = 1.5;
  Equilibrium eq = cos_equilibrium(grid, n, 0.3, delta);
  ScalarField rho_star(n);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      rho_star(i1, i2) = 1.0 + 0.3 * std::cos(2.0 * M_PI * i1 / static_cast<double>(n));
  DensityField rs = DensityField::validated(rho_star);

  DriftDiffusionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.record_every = 100;
  DensityTrajectory traj = solve_drift_diffusion(grid, eq.rho, rs, delta, cfg);

  for (size_t k = 0; k < traj.rho.size(); ++k) {
    CHECK(std::abs(grid_mean(traj.rho[k]) - grid_mean(eq.rho)) < 1e-10);
    ScalarField diff = traj.rho[k];
    for (size_t i = 0; i < diff.size(); ++i) diff.v[i] -= eq.rho.v[i];
    CHECK(grid_l2(diff) < 1e-8);
  }
}

TEST_CASE("drift-diffusion linearized decay rate is 4 pi^2 + 1/delta^2") {
  const int n = 32;
  SpectralGrid grid(n);
  const double delta = 1.0;
  DensityField rs = DensityField::validated(ScalarField(n, 1.0));
  ScalarField rho0(n);
  const double amp = 1e-4;  // linear regime
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      rho0(i1, i2) = 1.0 + amp * std::cos(2.0 * M_PI * i1 / static_cast<double>(n));

  DriftDiffusionConfig cfg;
  cfg.dt = 2e-5;
  cfg.t_end = 0.05;
  cfg.record_every = 50;
  DensityTrajectory traj = solve_drift_diffusion(grid, rho0, rs, delta, cfg);

  std::vector<double> t, v;
  for (size_t k = 0; k < traj.rho.size(); ++k) {
    ScalarField pert = traj.rho[k];
    for (double& x : pert.v) x -= 1.0;
    t.push_back(traj.times[k]);
    v.push_back(grid_l2(pert));
  }
  RateFit fit = fit_decay_rate(t, v, 0.0, cfg.t_end);
  const double expect = 4.0 * M_PI * M_PI + 1.0 / (delta * delta);
  CHECK(fit.rate == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("homogeneous relaxation is the exact per-shell decay") {
  Discretization d = disc();
  SpectralState h0(d);
  for (int g = 0; g < d.npts(); ++g) {
    h0.mode(1, 1)[g] = 1.0;
    h0.mode(0, 0)[g] = 0.5;
  }
  SpectralState at = homogeneous_fp_at(h0, 0.5);
  CHECK(at.mode(1, 1)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::exp(-1.0) == doctest::Approx(0.3678794).epsilon(1e-6));
  CHECK(at.mode(0, 0)[0] == doctest::Approx(0.5).epsilon(1e-15));  // kernel mode invariant

  std::vector<SpectralState> series = solve_homogeneous_fp(h0, 2.0, {0.0, 1.0});
  CHECK(series[0].mode(1, 1)[0] == doctest::Approx(1.0).epsilon(1e-15));  // identity at t = 0
  CHECK(series[1].mode(1, 1)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("rescaled run with t_ref = 1 matches the unscaled run") {
  Discretization d = disc();
  Space sp(d);
  Equilibrium flat = Equilibrium::flat(d.n_x, 10.0);
  InitialDataSpec ids;
  ids.seed = 4;
  ids.spatial_band = 3;
  ids.hermite_band = 3;
  SpectralState h0 = make_initial_data(sp, ids, flat);

  SolverConfig base;
  base.delta = 10.0;
  base.mode = RunMode::nonlinear;
  const double tau = 1.0;

  Trajectory rescaled = run_rescaled(sp, h0, base, tau, 1.0, 0.5, 0.05, flat);

  SolverConfig direct = base;
  direct.tau = tau;
  direct.t_end = 0.5;
  direct.record_every = rescaled.times.size() > 1
                            ? std::max(1, static_cast<int>(std::lround(
                                              (rescaled.times[1] - rescaled.times[0]) /
                                              direct.resolve_dt(d))))
                            : 1;
  Trajectory plain = run(sp, h0, direct, flat);
  REQUIRE(plain.times.size() == rescaled.times.size());
  for (size_t k = 0; k < plain.times.size(); ++k) {
    CHECK(plain.times[k] == doctest::Approx(rescaled.times[k]).epsilon(1e-12));
    CHECK(plain.samples[k].h2 == doctest::Approx(rescaled.samples[k].h2).epsilon(1e-12));
  }
}

TEST_CASE("moment residuals: zero trajectory and dt convergence") {
  Discretization d = disc(16, 6);
  Space sp(d);
  Equilibrium eq = cos_equilibrium(sp.grid(), d.n_x, 0.3, 10.0);

  SUBCASE("zero state gives zero residuals") {
    SolverConfig cfg;
    cfg.tau = 0.5;
    cfg.delta = 10.0;
    cfg.t_end = 0.05;
    cfg.dt = 5e-3;
    cfg.record_every = 2;
    cfg.record_fields = true;
    Trajectory traj = run(sp, SpectralState(d), cfg, eq);
    MomentResiduals mr = moment_residuals(sp, traj, cfg.tau, 1.0, eq);
    for (double r : mr.continuity) CHECK(r < 1e-13);
    for (double r : mr.momentum) CHECK(r < 1e-13);
  }

  SUBCASE("second-order residual decay for a smooth nonlinear run") {
    InitialDataSpec ids;
    ids.seed = 9;
    ids.spatial_band = 3;
    ids.hermite_band = 3;
    SpectralState h0 = make_initial_data(sp, ids, eq);

    auto worst = [&](double dt) {
      SolverConfig cfg;
      cfg.tau = 0.5;
      cfg.delta = 10.0;
      cfg.t_end = 0.2;
      cfg.dt = dt;
      cfg.mode = RunMode::nonlinear;
      cfg.record_every = 4;
      cfg.record_fields = true;
      Trajectory traj = run(sp, h0, cfg, eq);
      MomentResiduals mr = moment_residuals(sp, traj, cfg.tau, 1.0, eq);
      double c = 0, m = 0;
      for (double r : mr.continuity) c = std::max(c, r);
      for (double r : mr.momentum) m = std::max(m, r);
      return std::pair<double, double>(c, m);
    };
    auto [c1, m1] = worst(2e-3);
    auto [c2, m2] = worst(1e-3);
    CHECK(std::log2(c1 / c2) > 1.6);
    CHECK(std::log2(c1 / c2) < 2.4);
    CHECK(std::log2(m1 / m2) > 1.6);
    CHECK(std::log2(m1 / m2) < 2.4);
  }
}

TEST_CASE("convergence order fitting") {
  std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
  std::vector<double> lin, sq;
  for (double t : taus) {
    lin.push_back(3.0 * t);
    sq.push_back(2.0 * std::sqrt(t));
  }
  auto [o1, r1] = fit_convergence_order(taus, lin);
  CHECK(o1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r1 == doctest::Approx(1.0).epsilon(1e-12));
  auto [o2, r2] = fit_convergence_order(taus, sq);
  CHECK(o2 == doctest::Approx(0.5).epsilon(1e-10));

  CHECK_THROWS_AS(fit_convergence_order({0.1, 0.05}, {1.0, 0.5}), ConfigError);
  CHECK_THROWS_AS(fit_convergence_order({0.1, 0.05, 0.02}, {1.0, 0.0, 0.5}), ConfigError);
}

TEST_CASE("regime studies 4 and 5 shrink their errors with tau") {
  RegimeStudyConfig cfg;
  cfg.disc = disc(16, 6);
  cfg.delta = 20.0;
  cfg.horizon = 1.0;
  cfg.init.seed = 2;
  cfg.init.spatial_band = 3;
  cfg.init.hermite_band = 3;
  cfg.tau_list = {0.2, 0.1};

  cfg.regime = 4;
  RegimeReport r4 = run_regime_study(cfg);
  CHECK(r4.errors.size() == 2);
  CHECK(r4.errors[1] < r4.errors[0]);
  CHECK(r4.monotone);

  cfg.regime = 5;
  cfg.horizon = 0.5;
  RegimeReport r5 = run_regime_study(cfg);
  CHECK(r5.errors[1] < r5.errors[0]);
}

TEST_CASE("regime 1 decay rate grows as tau shrinks") {
  RegimeStudyConfig cfg;
  cfg.regime = 1;
  cfg.disc = disc(16, 6);
  cfg.delta = 20.0;
  cfg.horizon = 0.5;
  cfg.init.seed = 3;
  cfg.init.spatial_band = 3;
  cfg.init.hermite_band = 3;
  cfg.tau_list = {0.4, 0.2};
  RegimeReport rep = run_regime_study(cfg);
  REQUIRE(rep.rates.size() == 2);
  CHECK(rep.rates[1] > rep.rates[0]);
  CHECK(rep.monotone);
}
