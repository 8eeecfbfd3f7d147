#pragma once

#include "vpfp/trajectory.hpp"

namespace vpfp {

struct SolverConfig;

// Evaluate all functional and dissipation components at time t. E may be
// null (field-free runs); w = min(1, t/tau) weights are evaluated exactly.
FunctionalSample sample_functionals(const Space& sp, const SpectralState& h,
                                    const VectorField* E, const HypoParams& p, double tau,
                                    double delta, double t, const Equilibrium& eq);

// Quadratic and trilinear terms of the four energy identities, computed by
// composing the tested operators. Et is derived from g_tilde (mean-free).
struct QRReport {
  double Q_A = 0, Q_C = 0, Q_AC = 0, Qt_AC = 0;
  double R_0 = 0, R_A = 0, R_C = 0, R_AC = 0;
};

QRReport compute_QR_terms(const Space& sp, const SpectralState& h, const SpectralState& g,
                          const SpectralState& g_tilde, const Equilibrium& eq, double delta,
                          double tau);

// Residuals of the four energy identities along a trajectory recorded at
// uniform cadence with states retained: centered time difference of the left
// functional minus (-dissipation + Q + R) at the midpoint state.
struct ResidualSeries {
  std::vector<double> t;                          // midpoint times
  std::array<std::vector<double>, 4> residual;    // absolute residuals
  std::array<double, 4> max_rel{}, rms_rel{};     // scaled by the largest term
};

ResidualSeries energy_identity_residuals(const Space& sp, const Trajectory& traj,
                                         const Equilibrium& eq, const SolverConfig& cfg);

struct RateFit {
  double rate = 0;       // least-squares slope of -log(value) vs t
  double r_squared = 0;
  double t_min = 0, t_max = 0;
  int n_points = 0;
};

// window = [t_min, t_max]; requires positive values and at least 5 points
RateFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& value,
                       double t_min, double t_max);

// ||h||^2 / (||Ah||^2 + ||Ch||^2) for a mean-free nonzero h
double poincare_ratio(const Space& sp, const SpectralState& h, const Equilibrium& eq);

// smallest D / (min(tau^-1, tau^b3, tau^(b3-b2)) * (||h||^2 + tau^b1 ||Ah||^2
// + tau^b2 ||Ch||^2)) over samples with t >= tau; empirical entropy/
// dissipation constant of a run
double min_dissipation_ratio(const std::vector<FunctionalSample>& samples,
                             const HypoParams& p, double tau);

}  // namespace vpfp
