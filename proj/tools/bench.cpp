// Timing comparison between the OpenMP kernels and the serial reference
// implementations. Usage: vpfp_bench [n_x] [n_v] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vpfp/diagnostics.hpp"
#include "vpfp/solver.hpp"

using namespace vpfp;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double time_ms(int repeats, F&& fn) {
  fn();  // warm up
  const auto t0 = Clock::now();
  for (int r = 0; r < repeats; ++r) fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
  Discretization d;
  d.n_x = argc > 1 ? std::atoi(argv[1]) : 64;
  d.n_v = argc > 2 ? std::atoi(argv[2]) : 16;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 20;
  d.validate();

  Space sp(d);
  ScalarField rho(d.n_x);
  for (int i1 = 0; i1 < d.n_x; ++i1)
    for (int i2 = 0; i2 < d.n_x; ++i2)
      rho(i1, i2) = 1.0 + 0.3 * std::cos(2.0 * M_PI * i1 / d.n_x);
  Equilibrium eq = solve_poisson_boltzmann(sp.grid(), DensityField::validated(rho), 1.0);

  InitialDataSpec ids;
  ids.seed = 42;
  ids.spatial_band = d.n_x / 4;
  ids.hermite_band = d.n_v - 2;
  SpectralState h = make_initial_data(sp, ids, eq);

  MacroFields mf = compute_moments(sp, h, eq);
  VectorField E = solve_field(sp.grid(), mf.n, eq.delta);

#ifdef _OPENMP
  std::printf("n_x=%d n_v=%d threads=%d repeats=%d\n", d.n_x, d.n_v, omp_get_max_threads(),
              repeats);
#else
  std::printf("n_x=%d n_v=%d threads=1 (no OpenMP) repeats=%d\n", d.n_x, d.n_v, repeats);
#endif
  std::printf("%-28s %12s %12s %9s\n", "kernel", "parallel ms", "serial ms", "speedup");

  auto row = [&](const char* name, double par, double ser) {
    std::printf("%-28s %12.3f %12.3f %8.2fx\n", name, par, ser, ser / par);
  };

  row("apply_A",
      time_ms(repeats, [&] { (void)apply_A(h); }),
      time_ms(repeats, [&] { (void)ref::apply_A(h); }));
  row("apply_Astar",
      time_ms(repeats, [&] { (void)apply_Astar(h); }),
      time_ms(repeats, [&] { (void)ref::apply_Astar(h); }));
  row("apply_C",
      time_ms(repeats, [&] { (void)apply_C(sp, h); }),
      time_ms(repeats, [&] { (void)ref::apply_C(sp, h); }));
  row("apply_B",
      time_ms(repeats, [&] { (void)apply_B(sp, h, eq); }),
      time_ms(repeats, [&] { (void)ref::apply_B(sp, h, eq); }));
  row("inner_product",
      time_ms(repeats, [&] { (void)inner_product(sp, h, h, eq); }),
      time_ms(repeats, [&] { (void)ref::inner_product(sp, h, h, eq); }));
  row("rhs_nonstiff(nonlinear)",
      time_ms(repeats, [&] { (void)rhs_nonstiff(sp, h, eq, &E, &E, &h); }),
      time_ms(repeats, [&] { (void)ref::rhs_nonstiff(sp, h, eq, &E, &E, &h); }));

  return 0;
}
