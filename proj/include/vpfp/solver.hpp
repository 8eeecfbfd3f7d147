#pragma once

#include <cstdint>
#include <functional>

#include "vpfp/trajectory.hpp"

namespace vpfp {

enum class RunMode : std::uint8_t { nonlinear, linear_vfp, frozen };

// Time integration of the perturbation equation
//   dh/dt + (1/tau) A*.A h + B h = E.A*(1) + E.A*h        (nonlinear)
//   dh/dt + (1/tau) A*.A h + B h = 0                      (linear_vfp)
//   dh/dt + (1/tau) A*.A h + B h = E.A*(1) + Et.A*g       (frozen)
// by Strang splitting: the collision part is applied exactly through the
// diagonal factor exp(-|m| dt / tau), the rest with RK4. The field E is
// recomputed from h at every RK stage.
struct SolverConfig {
  double tau = 1.0;
  double delta = 1.0;
  double dt = 0.0;   // 0 = derive from CFL
  double cfl = 0.4;  // dt <= cfl * dx / v_max, v_max = sqrt(2 n_v + 1)
  double t_end = 1.0;
  RunMode mode = RunMode::nonlinear;
  int record_every = 10;  // steps between samples
  bool record_states = false;
  bool record_fields = false;
  bool light_samples = false;  // only ||h||^2 and field energy per sample
  HypoParams hypo;
  const StateSeries* frozen_source = nullptr;  // supplies (g_tilde, g)
  double blowup_factor = 1e6;

  void validate(const Discretization& d) const;
  double resolve_dt(const Discretization& d) const;  // also rounds to divide t_end
};

// Instantaneous non-stiff tendency (everything except (1/tau) A*.A):
//   -B h + E.A*(1) + Et.A*g
// E_inject: field entering the Hermite shells e_1, e_2 (null in linear mode).
// Et/g: the product pair (equal to E and h in nonlinear mode, sources in
// frozen mode, null in linear mode).
SpectralState rhs_nonstiff(const Space& sp, const SpectralState& h, const Equilibrium& eq,
                           const VectorField* E_inject, const VectorField* Et,
                           const SpectralState* g);

// One Strang step in place; t is the time at entry. Throws NumericsError on
// NaN/Inf with the offending time and the largest coefficient magnitude.
void step(const Space& sp, SpectralState& h, double t, double dt, const SolverConfig& cfg,
          const Equilibrium& eq);

// Called at every record point. Return false to request a stop.
using SampleObserver =
    std::function<bool(double t, const SpectralState& h, const FunctionalSample& s)>;

Trajectory run(const Space& sp, const SpectralState& h0, const SolverConfig& cfg,
               const Equilibrium& eq, const SampleObserver& observer = {});

namespace ref {
// composed from the individually tested operators; oracle for the fused path
SpectralState rhs_nonstiff(const Space& sp, const SpectralState& h, const Equilibrium& eq,
                           const VectorField* E_inject, const VectorField* Et,
                           const SpectralState* g);
}  // namespace ref

}  // namespace vpfp
