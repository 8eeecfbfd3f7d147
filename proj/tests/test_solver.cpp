#include <doctest.h>

#include <cmath>

#include "vpfp/diagnostics.hpp"
#include "vpfp/solver.hpp"

using namespace vpfp;

namespace {

Discretization disc(int n_x = 16, int n_v = 6) {
  Discretization d;
  d.n_x = n_x;
  d.n_v = n_v;
  return d;
}

SpectralState unit_mode(const Discretization& d, int m1, int m2, double value = 1.0) {
  SpectralState h(d);
  double* p = h.mode(m1, m2);
  for (int g = 0; g < d.npts(); ++g) p[g] = value;
  return h;
}

Equilibrium cos_equilibrium(const Space& sp, double eps, double delta) {
  ScalarField rho(sp.n_x());
  for (int i1 = 0; i1 < sp.n_x(); ++i1)
    for (int i2 = 0; i2 < sp.n_x(); ++i2)
      rho(i1, i2) = 1.0 + eps * std::cos(2.0 * M_PI * i1 / static_cast<double>(sp.n_x()));
  return solve_poisson_boltzmann(sp.grid(), DensityField::validated(rho), delta);
}

SpectralState random_state(const Space& sp, const Equilibrium& eq, std::uint64_t seed,
                           double norm = 1.0) {
  InitialDataSpec ids;
  ids.seed = seed;
  ids.target_norm = norm;
  ids.spatial_band = sp.n_x() / 4;
  ids.hermite_band = std::min(3, sp.n_v() - 2);
  return make_initial_data(sp, ids, eq);
}

}  // namespace

TEST_CASE("config validation") {
  Discretization d = disc();
  SolverConfig cfg;
  cfg.tau = -1;
  CHECK_THROWS_AS(cfg.validate(d), ConfigError);
  cfg.tau = 1;
  cfg.dt = 1.0;  // violates CFL
  CHECK_THROWS_AS(cfg.validate(d), ConfigError);
  cfg.dt = 0;
  cfg.mode = RunMode::frozen;  // no source
  CHECK_THROWS_AS(cfg.validate(d), ConfigError);
  cfg.mode = RunMode::nonlinear;
  CHECK_NOTHROW(cfg.validate(d));
  const double dt = cfg.resolve_dt(d);
  CHECK(dt <= cfg.cfl / (d.n_x * std::sqrt(2.0 * d.n_v + 1.0)) * (1 + 1e-12));
  CHECK(std::abs(cfg.t_end / dt - std::round(cfg.t_end / dt)) < 1e-9);
}

TEST_CASE("fused tendency matches the operator-composed reference") {
  Discretization d = disc(16, 6);
  Space sp(d);
  Equilibrium eq = cos_equilibrium(sp, 0.3, 5.0);
  SpectralState h = random_state(sp, eq, 7);

  MacroFields mf = compute_moments(sp, h, eq);
  VectorField E = solve_field(sp.grid(), mf.n, eq.delta);

  SUBCASE("nonlinear") {
    SpectralState a = rhs_nonstiff(sp, h, eq, &E, &E, &h);
    SpectralState b = ref::rhs_nonstiff(sp, h, eq, &E, &E, &h);
    double rel = 0;
    for (size_t i = 0; i < a.size(); ++i)
      rel = std::max(rel, std::abs(a.data()[i] - b.data()[i]));
    CHECK(rel < 1e-12 * std::max(1.0, state_max_abs(a)));
  }
  SUBCASE("linear") {
    SpectralState a = rhs_nonstiff(sp, h, eq, nullptr, nullptr, nullptr);
    SpectralState b = ref::rhs_nonstiff(sp, h, eq, nullptr, nullptr, nullptr);
    double rel = 0;
    for (size_t i = 0; i < a.size(); ++i)
      rel = std::max(rel, std::abs(a.data()[i] - b.data()[i]));
    CHECK(rel < 1e-12 * std::max(1.0, state_max_abs(a)));
  }
  SUBCASE("frozen pair differs from self-consistent") {
    SpectralState g = random_state(sp, eq, 8);
    MacroFields mg = compute_moments(sp, g, eq);
    VectorField Et = solve_field(sp.grid(), mg.n, eq.delta);
    SpectralState a = rhs_nonstiff(sp, h, eq, &E, &Et, &g);
    SpectralState b = ref::rhs_nonstiff(sp, h, eq, &E, &Et, &g);
    double rel = 0;
    for (size_t i = 0; i < a.size(); ++i)
      rel = std::max(rel, std::abs(a.data()[i] - b.data()[i]));
    CHECK(rel < 1e-12 * std::max(1.0, state_max_abs(a)));
  }
}

TEST_CASE("equilibrium is a fixed point and the zero tendency is exact") {
  Discretization d = disc();
  Space sp(d);
  Equilibrium eq = cos_equilibrium(sp, 0.3, 2.0);
  SpectralState zero(d);
  SolverConfig cfg;
  cfg.tau = 0.7;
  cfg.delta = 2.0;
  cfg.t_end = 1.0;
  cfg.record_every = 20;
  Trajectory traj = run(sp, zero, cfg, eq);
  for (const FunctionalSample& s : traj.samples) CHECK(std::sqrt(s.h2) <= 1e-12);
}

TEST_CASE("x-independent data under a flat background reduces to pure relaxation") {
  Discretization d = disc(16, 6);
  Space sp(d);
  Equilibrium flat = Equilibrium::flat(d.n_x, 1.0);
  const double tau = 0.7;

  // single step: exact eigenflow of the collision factor
  SpectralState h = unit_mode(d, 1, 0);
  SolverConfig cfg;
  cfg.tau = tau;
  cfg.delta = 1.0;
  cfg.t_end = 1.0;
  const double dt = 1e-2;
  step(sp, h, 0.0, dt, cfg, flat);
  const double expect = std::exp(-dt / tau);
  double err = 0;
  for (int g = 0; g < d.npts(); ++g)
    err = std::max(err, std::abs(h.mode(1, 0)[g] - expect));
  CHECK(err < 1e-14);

  // full run in nonlinear mode: mean-free x-independent data stays on the
  // exact per-shell decay e^{-|m| t / tau}
  SpectralState h0 = unit_mode(d, 1, 1);
  state_axpy(1.0, unit_mode(d, 2, 0, 0.5), h0);
  cfg.t_end = 2.0;
  cfg.mode = RunMode::nonlinear;
  cfg.record_every = 50;
  Trajectory traj = run(sp, h0, cfg, flat);
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double e2 = std::exp(-2.0 * t / tau);
    const double expect_norm =
        std::sqrt(e2 * e2 + 0.25 * e2 * e2);  // both shells have |m| = 2
    CHECK(std::sqrt(traj.samples[k].h2) == doctest::Approx(expect_norm).epsilon(1e-8));
  }
}

TEST_CASE("mass is conserved and the norm decays in linear mode") {
  Discretization d = disc(16, 6);
  Space sp(d);
  Equilibrium eq = cos_equilibrium(sp, 0.3, 10.0);
  SpectralState h0 = random_state(sp, eq, 12);
  SolverConfig cfg;
  cfg.tau = 0.5;
  cfg.delta = 10.0;
  cfg.t_end = 2.0;
  cfg.mode = RunMode::linear_vfp;
  cfg.record_every = 20;
  Trajectory traj = run(sp, h0, cfg, eq);
  for (double m : traj.conserved) CHECK(std::abs(m - traj.conserved.front()) <= 1e-9);
  for (size_t k = 1; k < traj.samples.size(); ++k)
    CHECK(traj.samples[k].h2 <= traj.samples[k - 1].h2 * (1.0 + 1e-12));
}

TEST_CASE("strang splitting shows second-order self-convergence") {
  Discretization d = disc(16, 6);
  Space sp(d);
  Equilibrium eq = cos_equilibrium(sp, 0.3, 5.0);
  SpectralState h0 = random_state(sp, eq, 3);

  SolverConfig cfg;
  cfg.tau = 0.1;  // stiff enough that the splitting error dominates RK4's
  cfg.delta = 5.0;
  cfg.t_end = 0.25;
  cfg.mode = RunMode::nonlinear;

  auto end_state = [&](double dt) {
    SpectralState h = h0;
    const long steps = std::lround(cfg.t_end / dt);
    for (long k = 0; k < steps; ++k) step(sp, h, k * dt, dt, cfg, eq);
    return h;
  };

  SpectralState ref_state = end_state(3.125e-4);
  auto err = [&](double dt) {
    SpectralState h = end_state(dt);
    h -= ref_state;
    return norm_h(sp, h, eq);
  };
  const double e1 = err(2.5e-3);
  const double e2 = err(1.25e-3);
  const double ratio = e1 / e2;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.5);
}

TEST_CASE("frozen mode requires a source and reproduces the self-consistent run") {
  Discretization d = disc(16, 6);
  Space sp(d);
  Equilibrium eq = cos_equilibrium(sp, 0.3, 10.0);
  SpectralState h0 = random_state(sp, eq, 21, 0.5);

  SolverConfig cfg;
  cfg.tau = 1.0;
  cfg.delta = 10.0;
  cfg.t_end = 0.3;
  cfg.mode = RunMode::nonlinear;
  cfg.record_every = 5;
  cfg.record_states = true;
  Trajectory self = run(sp, h0, cfg, eq);

  StateSeries src = StateSeries::from_trajectory(self);
  SolverConfig fz = cfg;
  fz.mode = RunMode::frozen;
  fz.frozen_source = &src;
  fz.record_states = false;
  Trajectory frozen = run(sp, h0, fz, eq);

  // freezing the sources at the self-consistent trajectory reproduces it
  // up to interpolation error of the source series
  for (size_t k = 0; k < frozen.samples.size(); ++k) {
    CHECK(std::sqrt(frozen.samples[k].h2) ==
          doctest::Approx(std::sqrt(self.samples[k].h2)).epsilon(1e-4));
  }
}

TEST_CASE("NaN input aborts with a numerical error") {
  Discretization d = disc();
  Space sp(d);
  Equilibrium flat = Equilibrium::flat(d.n_x, 1.0);
  SpectralState h = unit_mode(d, 1, 0);
  h.mode(1, 0)[3] = std::numeric_limits<double>::quiet_NaN();
  SolverConfig cfg;
  cfg.tau = 1.0;
  CHECK_THROWS_AS(step(sp, h, 0.0, 1e-3, cfg, flat), NumericsError);
}
