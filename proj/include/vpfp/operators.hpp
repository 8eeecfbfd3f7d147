#pragma once

#include <array>
#include <cstdint>

#include "vpfp/equilibrium.hpp"
#include "vpfp/space.hpp"

namespace vpfp {

using StatePair = std::array<SpectralState, 2>;

// Velocity-ladder and transport operators on the Fourier-Hermite
// representation. A_i lowers Hermite indices with factor sqrt(m_i), its
// adjoint A*_i raises with sqrt(m_i+1); raising past the top retained mode
// drops the coefficient (closure by truncation). C_i is the spectral
// x_i-derivative and B = v.grad_x - grad(phi).grad_v the weighted-skew
// transport operator. Hot loops are OpenMP-parallel; serial mirrors used as
// reference in tests and benchmarks live in vpfp::ref.

StatePair apply_A(const SpectralState& h);
StatePair apply_Astar(const SpectralState& h);
StatePair apply_C(const Space& sp, const SpectralState& h);
SpectralState apply_B(const Space& sp, const SpectralState& h, const Equilibrium& eq);
// A*.A, diagonal with eigenvalue m1+m2
SpectralState apply_FP(const SpectralState& h);

// scale every Hermite coefficient by factor^(m1+m2); exact flow of the
// collision operator over log(1/factor)*tau time units
void fp_scale(SpectralState& h, double factor);

// <a,b> = sum_m int a_m b_m e^{-phi} dx
double inner_product(const Space& sp, const SpectralState& a, const SpectralState& b,
                     const Equilibrium& eq);

// <1,h> = int h_00 e^{-phi} dx
double weighted_mass(const Space& sp, const SpectralState& h, const Equilibrium& eq);

// subtract <1,h>/<1,1> from the (0,0) coefficient field
void project_mean_free(const Space& sp, SpectralState& h, const Equilibrium& eq);

struct NormsBundle {
  double h2 = 0;        // ||h||^2
  double Ah2 = 0;       // ||Ah||^2
  double Ch2 = 0;       // ||Ch||^2
  double cross_AC = 0;  // <Ah,Ch>
  double A2h2 = 0;      // ||A^2 h||^2
  double ACh2 = 0;      // ||ACh||^2
  double AsAh2 = 0;     // ||A*.Ah||^2
};

NormsBundle norms_bundle(const Space& sp, const SpectralState& h, const Equilibrium& eq);

inline double norm_h(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  return std::sqrt(std::max(0.0, inner_product(sp, h, h, eq)));
}

// fraction of ||h||^2 carried by the top Hermite shell max(m1,m2) = n_v-1;
// monitors truncation leakage
double tail_mass_fraction(const Space& sp, const SpectralState& h, const Equilibrium& eq);

enum class InitKind : std::uint8_t { random_band, single_mode, grid_file };

struct InitialDataSpec {
  std::uint64_t seed = 1;
  double target_norm = 1.0;  // R0
  int spatial_band = 3;      // max |k| per direction
  int hermite_band = 3;      // max Hermite index per direction
  InitKind kind = InitKind::random_band;
  int kx = 1, ky = 0;  // single_mode: spatial wavenumbers
  int n1 = 0, n2 = 0;  // single_mode: Hermite index
  std::string file;    // grid_file
};

// Deterministic in the seed; output is projected mean-free in the weighted
// sense and scaled to ||h|| = target_norm.
SpectralState make_initial_data(const Space& sp, const InitialDataSpec& spec,
                                const Equilibrium& eq);

// Serial reference implementations (plain loops, per-mode transforms,
// operators composed rather than fused). Kept for correctness tests and for
// the benchmark target.
namespace ref {

StatePair apply_A(const SpectralState& h);
StatePair apply_Astar(const SpectralState& h);
StatePair apply_C(const Space& sp, const SpectralState& h);
SpectralState apply_B(const Space& sp, const SpectralState& h, const Equilibrium& eq);
SpectralState apply_FP(const SpectralState& h);
double inner_product(const Space& sp, const SpectralState& a, const SpectralState& b,
                     const Equilibrium& eq);

}  // namespace ref

}  // namespace vpfp
