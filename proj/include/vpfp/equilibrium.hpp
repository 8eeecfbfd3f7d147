#pragma once

#include <vector>

#include "vpfp/errors.hpp"
#include "vpfp/fields.hpp"
#include "vpfp/grid.hpp"

namespace vpfp {

// Dimensionless background charge density rho_*, normalized to unit total
// charge. Inputs that are not mean-one are rejected rather than renormalized.
struct DensityField {
  ScalarField rho;

  static DensityField validated(ScalarField f, double tol = 1e-12);
};

struct PBSolverConfig {
  double tol = 1e-10;  // residual L2 tolerance
  int max_iter = 50;   // Newton iteration cap
  int damping = 20;    // line-search halving cap
};

// Stationary potential and the derived weight fields. Immutable once built.
struct Equilibrium {
  ScalarField phi;          // stationary potential
  ScalarField rho;          // exp(-phi), the spatial weight
  VectorField grad_phi;     // spectral gradient of phi
  SymTensorField hess_phi;  // spectral Hessian of phi
  double delta = 1.0;
  bool uniform = false;  // phi identically zero (flat background)

  int n() const { return phi.n; }

  // flat background, phi = 0, rho = 1
  static Equilibrium flat(int n, double delta);
};

// Variational energy whose minimizer (after mean shift) solves the
// stationary potential equation:
//   (delta^2/2) int |grad phi|^2 + int phi rho_* + ln int e^{-phi}.
// The coupling uses rho_* rather than rho_* - 1, which makes the value
// invariant under constant shifts of phi; the two agree on mean-zero fields.
double pb_energy(const SpectralGrid& grid, const ScalarField& phi,
                 const DensityField& rho_star, double delta);

// Newton iteration on F(phi) = -delta^2 Lap(phi) - e^{-phi} + rho_*, starting
// from phi = 0. The Jacobian -delta^2 Lap + e^{-phi} is SPD and is inverted
// by conjugate gradients preconditioned with (-delta^2 Lap + 1)^{-1} in
// Fourier space. Backtracking halves the step until the residual decreases.
Equilibrium solve_poisson_boltzmann(const SpectralGrid& grid, const DensityField& rho_star,
                                    double delta, const PBSolverConfig& cfg = {});

struct LpBound {
  double p;
  double lhs;  // ||e^{-phi}||_p
  double rhs;  // ||rho_*||_p
  bool holds;
};

struct BoundsReport {
  std::vector<LpBound> lp;
  double grad_energy;  // delta^2 ||grad phi||_L2^2
  double mean_abs;     // |int phi|
};

BoundsReport verify_equilibrium_bounds(const Equilibrium& eq, const DensityField& rho_star,
                                       const std::vector<double>& p_list);

}  // namespace vpfp
