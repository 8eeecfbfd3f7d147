#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vpfp/solver.hpp"

namespace vpfp {

// Observation-time rule t_ref(tau) selecting the asymptotic regime.
struct TimeRefRule {
  enum class Kind { inv_tau, tau, power, fixed } kind = Kind::inv_tau;
  double param = 1.0;  // exponent for power, value for fixed

  double t_ref(double tau) const;
  std::string describe() const;
  static TimeRefRule parse(const std::string& text);

  // conventional rules per regime 1..5: tau^-2, 1/tau, fixed 1, tau, tau^2
  static TimeRefRule for_regime(int regime);
};

// Macroscopic density evolution under drift-diffusion coupled to the
// periodic field equation:
//   d rho/dt + div(E rho - grad rho) = 0,  E = delta^-2 grad Lap^-1 (rho - rho_*).
// Semi-implicit spectral stepping: Crank-Nicolson diffusion in Fourier
// space, Adams-Bashforth drift with 2/3 dealiasing (Euler startup step).
// The k = 0 mode is untouched by either term, so mass is conserved exactly.
struct DriftDiffusionConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 1;
  bool dealias = true;
};

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<ScalarField> rho;
  std::vector<VectorField> E;
};

DensityTrajectory solve_drift_diffusion(const SpectralGrid& grid, const ScalarField& rho0,
                                        const DensityField& rho_star, double delta,
                                        const DriftDiffusionConfig& cfg);

// Exact velocity relaxation: coefficient at Hermite index m is multiplied by
// exp(-|m| t / time_scale); no spatial coupling.
std::vector<SpectralState> solve_homogeneous_fp(const SpectralState& h0, double time_scale,
                                                const std::vector<double>& times);
SpectralState homogeneous_fp_at(const SpectralState& h0, double scaled_time);

// Integrate the rescaled system at observation time t_ref(tau): run the
// unscaled integrator to horizon * t_ref physical time and relabel t -> t/t_ref.
// record_ds is the requested sample spacing in rescaled time.
Trajectory run_rescaled(const Space& sp, const SpectralState& h0, const SolverConfig& base,
                        double tau, double t_ref, double horizon, double record_ds,
                        const Equilibrium& eq, const SampleObserver& observer = {});

// Centered-difference residuals of the continuity and momentum equations
// along a rescaled trajectory recorded with macroscopic fields, plus the
// corrected density n_tilde = n - tau div j at every sample.
struct MomentResiduals {
  std::vector<double> t;           // midpoint times
  std::vector<double> continuity;  // L2 norms
  std::vector<double> momentum;
  std::vector<ScalarField> n_tilde;  // per sample, aligned with traj.times
};

MomentResiduals moment_residuals(const Space& sp, const Trajectory& traj, double tau,
                                 double t_ref, const Equilibrium& eq);

// log-log least-squares slope of errors against taus; returns (order, r^2)
std::pair<double, double> fit_convergence_order(const std::vector<double>& taus,
                                                const std::vector<double>& errors);

// One tau-sweep of a limit-model comparison. Regimes: 1 steady state,
// 2 drift-diffusion, 3 frozen density, 4 homogeneous relaxation, 5 frozen data.
struct RegimeStudyConfig {
  int regime = 2;
  TimeRefRule rule;  // defaults to for_regime(regime)
  bool rule_set = false;
  std::vector<double> tau_list;  // decreasing; >= 3 entries for order fitting
  double horizon = 1.0;          // rescaled comparison horizon
  double delta = 20.0;
  Discretization disc;
  InitialDataSpec init;
  double cfl = 0.4;
  double dd_dt = 2e-4;  // drift-diffusion comparison step (regime 2)
};

struct RegimeReport {
  int regime = 0;
  std::string rule;
  double horizon = 0;
  std::vector<double> taus;
  std::vector<double> errors;       // regime-defining error per tau
  std::vector<double> err_ntilde;   // regime 2: corrected density vs limit
  std::vector<double> err_density;  // regime 2: raw density vs limit
  double order = 0, r_squared = 0;  // fitted on errors (>= 3 taus)
  double order_ntilde = 0, r2_ntilde = 0;
  bool monotone = true;       // errors (or rates, regime 1) improve along tau_list
  std::vector<double> rates;  // regime 1: fitted decay rate per tau
};

RegimeReport run_regime_study(const RegimeStudyConfig& cfg);

}  // namespace vpfp
