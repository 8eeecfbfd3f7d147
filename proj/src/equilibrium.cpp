#include "vpfp/equilibrium.hpp"

#include <cmath>
#include <string>

#include "vpfp/errors.hpp"

namespace vpfp {

DensityField DensityField::validated(ScalarField f, double tol) {
  if (!grid_finite(f)) throw ConfigError("rho_star contains non-finite values");
  const double mean = grid_mean(f);
  if (std::abs(mean - 1.0) > tol)
    throw ConfigError("rho_star must have grid mean 1 (got " + std::to_string(mean) +
                      "); renormalize the input explicitly");
  return DensityField{std::move(f)};
}

Equilibrium Equilibrium::flat(int n, double delta) {
  Equilibrium eq;
  eq.phi = ScalarField(n, 0.0);
  eq.rho = ScalarField(n, 1.0);
  eq.grad_phi = VectorField(n);
  eq.hess_phi = SymTensorField(n);
  eq.delta = delta;
  eq.uniform = true;
  return eq;
}

double pb_energy(const SpectralGrid& grid, const ScalarField& phi,
                 const DensityField& rho_star, double delta) {
  VectorField g = grid.gradient(phi);
  double grad2 = 0.0, coupling = 0.0, mexp = 0.0;
  const size_t m = phi.size();
  for (size_t i = 0; i < m; ++i) {
    grad2 += g[0].v[i] * g[0].v[i] + g[1].v[i] * g[1].v[i];
    coupling += phi.v[i] * rho_star.rho.v[i];
    mexp += std::exp(-phi.v[i]);
  }
  const double inv = 1.0 / static_cast<double>(m);
  const double val = 0.5 * delta * delta * grad2 * inv + coupling * inv + std::log(mexp * inv);
  if (!std::isfinite(val)) throw NumericsError("pb_energy evaluation overflowed");
  return val;
}

namespace {

ScalarField residual_of(const SpectralGrid& grid, const ScalarField& phi,
                        const DensityField& rho_star, double delta) {
  ScalarField F = grid.laplacian(phi);
  const double d2 = delta * delta;
  for (size_t i = 0; i < F.size(); ++i)
    F.v[i] = -d2 * F.v[i] - std::exp(-phi.v[i]) + rho_star.rho.v[i];
  return F;
}

// CG on (-delta^2 Lap + diag(w)) x = b with Fourier preconditioner
// (-delta^2 Lap + 1)^{-1}; w = e^{-phi} > 0 keeps the operator SPD.
ScalarField newton_direction(const SpectralGrid& grid, const ScalarField& w,
                             const ScalarField& b, double delta) {
  const int n = grid.n();
  const double d2 = delta * delta;
  auto apply = [&](const ScalarField& x) {
    ScalarField y = grid.laplacian(x);
    for (size_t i = 0; i < y.size(); ++i) y.v[i] = -d2 * y.v[i] + w.v[i] * x.v[i];
    return y;
  };
  auto precond = [&](const ScalarField& r) {
    std::vector<Cplx> spec(static_cast<size_t>(grid.nk()));
    grid.forward(r.data(), spec.data());
    const double* lap = grid.laplace_mult();
    for (int i = 0; i < grid.nk(); ++i)
      spec[static_cast<size_t>(i)] /= (1.0 - d2 * lap[static_cast<size_t>(i)]);
    ScalarField z(n);
    grid.backward(spec.data(), z.data());
    return z;
  };
  auto dot = [](const ScalarField& a, const ScalarField& c) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a.v[i] * c.v[i];
    return s;
  };

  ScalarField x(n, 0.0), r = b, z = precond(r), p = z;
  double rz = dot(r, z);
  const double b2 = dot(b, b);
  if (b2 == 0.0) return x;
  const double tol2 = 1e-24 * b2;
  for (int it = 0; it < 400; ++it) {
    ScalarField Ap = apply(p);
    const double alpha = rz / dot(p, Ap);
    field_axpy(alpha, p, x);
    field_axpy(-alpha, Ap, r);
    if (dot(r, r) < tol2) break;
    z = precond(r);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < p.size(); ++i) p.v[i] = z.v[i] + beta * p.v[i];
  }
  return x;
}

}  // namespace

Equilibrium solve_poisson_boltzmann(const SpectralGrid& grid, const DensityField& rho_star,
                                    double delta, const PBSolverConfig& cfg) {
  if (delta <= 0.0) throw ConfigError("delta must be positive");
  if (cfg.tol <= 0.0) throw ConfigError("pb.tol must be positive");
  if (cfg.max_iter < 1) throw ConfigError("pb.max_iter must be >= 1");
  const int n = grid.n();
  if (rho_star.rho.n != n) throw ConfigError("rho_star grid does not match solver grid");

  ScalarField phi(n, 0.0);
  ScalarField F = residual_of(grid, phi, rho_star, delta);
  double rnorm = grid_l2(F);
  int iter = 0;
  while (rnorm > cfg.tol) {
    if (iter++ >= cfg.max_iter)
      throw ConvergenceError("Poisson-Boltzmann Newton iteration did not converge; last residual " +
                                 std::to_string(rnorm),
                             rnorm);
    ScalarField w(n);
    for (size_t i = 0; i < w.size(); ++i) w.v[i] = std::exp(-phi.v[i]);
    ScalarField b(n);
    for (size_t i = 0; i < b.size(); ++i) b.v[i] = -F.v[i];
    ScalarField d = newton_direction(grid, w, b, delta);

    double s = 1.0;
    ScalarField trial(n);
    for (int halve = 0;; ++halve) {
      for (size_t i = 0; i < trial.size(); ++i) trial.v[i] = phi.v[i] + s * d.v[i];
      ScalarField Ft = residual_of(grid, trial, rho_star, delta);
      const double rt = grid_l2(Ft);
      if (rt < rnorm || halve >= cfg.damping) {
        phi = trial;
        F = Ft;
        rnorm = rt;
        break;
      }
      s *= 0.5;
    }
    if (!grid_finite(phi)) throw NumericsError("Poisson-Boltzmann iterate diverged");
  }

  Equilibrium eq;
  eq.delta = delta;
  eq.phi = phi;
  eq.rho = ScalarField(n);
  for (size_t i = 0; i < phi.size(); ++i) eq.rho.v[i] = std::exp(-phi.v[i]);
  eq.grad_phi = grid.gradient(phi);
  eq.hess_phi = SymTensorField(n);
  eq.hess_phi.xx = grid.derivative(eq.grad_phi[0], 0);
  eq.hess_phi.xy = grid.derivative(eq.grad_phi[0], 1);
  eq.hess_phi.yy = grid.derivative(eq.grad_phi[1], 1);
  eq.uniform = grid_linf(phi) == 0.0;
  return eq;
}

BoundsReport verify_equilibrium_bounds(const Equilibrium& eq, const DensityField& rho_star,
                                       const std::vector<double>& p_list) {
  BoundsReport rep;
  for (double p : p_list) {
    LpBound b;
    b.p = p;
    b.lhs = grid_lp(eq.rho, p);
    b.rhs = grid_lp(rho_star.rho, p);
    b.holds = b.lhs <= b.rhs * (1.0 + 1e-12);
    rep.lp.push_back(b);
  }
  const double g2 = grid_l2_vec(eq.grad_phi);
  rep.grad_energy = eq.delta * eq.delta * g2 * g2;
  rep.mean_abs = std::abs(grid_mean(eq.phi));
  return rep;
}

}  // namespace vpfp
