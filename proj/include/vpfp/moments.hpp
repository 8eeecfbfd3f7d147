#pragma once

#include "vpfp/equilibrium.hpp"
#include "vpfp/operators.hpp"

namespace vpfp {

// Macroscopic moments of h and the self-consistent electric field.
// Moments read directly off the Hermite shells 0, 1 and 2:
//   n    = e^{-phi} h_00
//   j_i  = e^{-phi} h_{e_i}
//   S_ii = sqrt(2) e^{-phi} h_{2 e_i},  S_12 = e^{-phi} h_{(1,1)}
struct MacroFields {
  ScalarField n;
  VectorField j;
  SymTensorField S;
  VectorField E;
  double delta = 1.0;
};

// n, j, S only; E is left empty
MacroFields compute_moments(const Space& sp, const SpectralState& h, const Equilibrium& eq);

// mean-zero potential psi with -delta^2 Lap(psi) = n
ScalarField solve_potential(const SpectralGrid& grid, const ScalarField& n, double delta);

// E = delta^{-2} grad Lap^{-1} n = -grad(psi); requires |mean(n)| <= 1e-9
VectorField solve_field(const SpectralGrid& grid, const ScalarField& n, double delta);

// moments plus field in one call
MacroFields compute_macro(const Space& sp, const SpectralState& h, const Equilibrium& eq);

}  // namespace vpfp
