#include "vpfp/moments.hpp"

#include <cmath>
#include <string>

#include "vpfp/errors.hpp"

namespace vpfp {

MacroFields compute_moments(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  const Discretization& d = h.disc();
  const int n = d.n_x, np = d.npts();
  MacroFields mf;
  mf.delta = eq.delta;
  mf.n = ScalarField(n);
  mf.j = VectorField(n);
  mf.S = SymTensorField(n);
  const double* w = eq.rho.data();
  const double* h00 = h.mode(0, 0);
  const double* h10 = h.mode(1, 0);
  const double* h01 = h.mode(0, 1);
  const double* h20 = d.n_v > 2 ? h.mode(2, 0) : nullptr;
  const double* h02 = d.n_v > 2 ? h.mode(0, 2) : nullptr;
  const double* h11 = h.mode(1, 1);
  const double r2 = std::sqrt(2.0);
  for (int g = 0; g < np; ++g) {
    mf.n.v[g] = w[g] * h00[g];
    mf.j[0].v[g] = w[g] * h10[g];
    mf.j[1].v[g] = w[g] * h01[g];
    mf.S.xx.v[g] = h20 ? r2 * w[g] * h20[g] : 0.0;
    mf.S.yy.v[g] = h02 ? r2 * w[g] * h02[g] : 0.0;
    mf.S.xy.v[g] = w[g] * h11[g];
  }
  return mf;
}

ScalarField solve_potential(const SpectralGrid& grid, const ScalarField& n, double delta) {
  return grid.poisson(n, delta);
}

VectorField solve_field(const SpectralGrid& grid, const ScalarField& n, double delta) {
  const double mean = grid_mean(n);
  if (std::abs(mean) > 1e-9)
    throw ConfigError("solve_field: source has nonzero mean " + std::to_string(mean) +
                      "; the periodic Poisson problem is unsolvable");
  ScalarField psi = grid.poisson(n, delta);
  VectorField E = grid.gradient(psi);
  for (int i = 0; i < 2; ++i)
    for (double& x : E[i].v) x = -x;
  return E;
}

MacroFields compute_macro(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  MacroFields mf = compute_moments(sp, h, eq);
  mf.E = solve_field(sp.grid(), mf.n, eq.delta);
  return mf;
}

}  // namespace vpfp
