#include "vpfp/solver.hpp"

#include <cmath>
#include <string>

#include "vpfp/diagnostics.hpp"
#include "vpfp/parallel.hpp"

namespace vpfp {

void SolverConfig::validate(const Discretization& d) const {
  if (tau <= 0.0) throw ConfigError("tau must be positive");
  if (delta <= 0.0) throw ConfigError("delta must be positive");
  if (t_end <= 0.0) throw ConfigError("t_end must be positive");
  if (cfl <= 0.0) throw ConfigError("cfl must be positive");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
  if (mode == RunMode::frozen && frozen_source == nullptr)
    throw ConfigError("frozen mode requires a source trajectory");
  if (dt > 0.0) {
    const double vmax = std::sqrt(2.0 * d.n_v + 1.0);
    const double bound = cfl / (d.n_x * vmax);
    if (dt > bound * (1.0 + 1e-12))
      throw ConfigError("dt violates the CFL bound " + std::to_string(bound));
  }
}

double SolverConfig::resolve_dt(const Discretization& d) const {
  double target = dt;
  if (target <= 0.0) {
    const double vmax = std::sqrt(2.0 * d.n_v + 1.0);
    target = cfl / (d.n_x * vmax);
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / target - 1e-12)));
  return t_end / static_cast<double>(steps);
}

namespace {

// Fused tendency: one forward batch of h, pointwise products on the grid,
// one forward batch of the products, ladder/derivative assembly in spectral
// space (transport is never aliased; the product block is 2/3-masked when
// dealiasing is on), one backward batch. Field injection is added on the
// grid afterwards.
void rhs_fused(const Space& sp, const SpectralState& h, const Equilibrium& eq,
               const VectorField* E_inject, const VectorField* Et, const SpectralState* g,
               SpectralState& out) {
  const Discretization& d = h.disc();
  const SpectralGrid& grid = sp.grid();
  const int nv = d.n_v, np = d.npts(), nk = grid.nk(), modes = d.modes();
  const bool has_products = (!eq.uniform) || (Et != nullptr && g != nullptr);

  static thread_local std::vector<Cplx> ws_hk, ws_tk, ws_gk;
  static thread_local std::vector<double> ws_G;
  ws_hk.resize(static_cast<size_t>(modes) * nk);
  ws_tk.resize(static_cast<size_t>(modes) * nk);
  if (has_products) {
    ws_gk.resize(static_cast<size_t>(modes) * nk);
    ws_G.resize(static_cast<size_t>(modes) * np);
  }
  Cplx* const hk = ws_hk.data();
  Cplx* const tk = ws_tk.data();
  Cplx* const gk = has_products ? ws_gk.data() : nullptr;
  double* const Gbuf = has_products ? ws_G.data() : nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < modes; ++m) {
    grid.forward(h.mode(m), hk + static_cast<size_t>(m) * nk);
    if (has_products) {
      // G_m = grad(phi).(A h)_m + Et.(A* g)_m, assembled pointwise
      double* G = Gbuf + static_cast<size_t>(m) * np;
      for (int p = 0; p < np; ++p) G[p] = 0.0;
      const int m1 = m / nv, m2 = m % nv;
      if (!eq.uniform) {
        if (m1 + 1 < nv) {
          const double f = std::sqrt(m1 + 1.0);
          const double* src = h.mode(m1 + 1, m2);
          const double* w = eq.grad_phi[0].data();
          for (int p = 0; p < np; ++p) G[p] += f * w[p] * src[p];
        }
        if (m2 + 1 < nv) {
          const double f = std::sqrt(m2 + 1.0);
          const double* src = h.mode(m1, m2 + 1);
          const double* w = eq.grad_phi[1].data();
          for (int p = 0; p < np; ++p) G[p] += f * w[p] * src[p];
        }
        // G carries -grad(phi).Ah with the overall minus of -Bh folded in below
      }
      if (Et != nullptr && g != nullptr) {
        if (m1 > 0) {
          const double f = std::sqrt(static_cast<double>(m1));
          const double* src = g->mode(m1 - 1, m2);
          const double* w = (*Et)[0].data();
          // both the phi product and the Et product enter the tendency with +,
          // so the spectral stage just adds the masked block
          for (int p = 0; p < np; ++p) G[p] += f * w[p] * src[p];
        }
        if (m2 > 0) {
          const double f = std::sqrt(static_cast<double>(m2));
          const double* src = g->mode(m1, m2 - 1);
          const double* w = (*Et)[1].data();
          for (int p = 0; p < np; ++p) G[p] += f * w[p] * src[p];
        }
      }
      grid.forward(G, gk + static_cast<size_t>(m) * nk);
    }
  }

  const double* d1 = grid.deriv_mult(0);
  const double* d2 = grid.deriv_mult(1);
  const unsigned char* keep = grid.keep_mask();
  const bool mask = d.dealias;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < modes; ++m) {
    const int m1 = m / nv, m2 = m % nv;
    Cplx* t = tk + static_cast<size_t>(m) * nk;
    const Cplx* up1 = (m1 + 1 < nv) ? hk + static_cast<size_t>(d.mode_index(m1 + 1, m2)) * nk : nullptr;
    const Cplx* dn1 = (m1 > 0) ? hk + static_cast<size_t>(d.mode_index(m1 - 1, m2)) * nk : nullptr;
    const Cplx* up2 = (m2 + 1 < nv) ? hk + static_cast<size_t>(d.mode_index(m1, m2 + 1)) * nk : nullptr;
    const Cplx* dn2 = (m2 > 0) ? hk + static_cast<size_t>(d.mode_index(m1, m2 - 1)) * nk : nullptr;
    const double f_up1 = std::sqrt(m1 + 1.0), f_dn1 = std::sqrt(static_cast<double>(m1));
    const double f_up2 = std::sqrt(m2 + 1.0), f_dn2 = std::sqrt(static_cast<double>(m2));
    const Cplx* gsp = has_products ? gk + static_cast<size_t>(m) * nk : nullptr;
    for (int ik = 0; ik < nk; ++ik) {
      // -(A_i + A*_i) d_i h in spectral space
      Cplx v1(0.0, 0.0), v2(0.0, 0.0);
      if (up1) v1 += f_up1 * up1[ik];
      if (dn1) v1 += f_dn1 * dn1[ik];
      if (up2) v2 += f_up2 * up2[ik];
      if (dn2) v2 += f_dn2 * dn2[ik];
      Cplx acc = Cplx(0.0, -d1[ik]) * v1 + Cplx(0.0, -d2[ik]) * v2;
      if (gsp && (!mask || keep[ik])) {
        // stored G = grad(phi).Ah + Et.A*g; -Bh contributes +grad(phi).Ah
        acc += gsp[ik];
      }
      t[ik] = acc;
    }
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < modes; ++m)
    grid.backward_destroy(tk + static_cast<size_t>(m) * nk, out.mode(m));

  if (E_inject != nullptr) {
    for (int i = 0; i < 2; ++i) {
      double* dst = out.mode(i == 0 ? d.mode_index(1, 0) : d.mode_index(0, 1));
      const double* e = (*E_inject)[i].data();
      for (int p = 0; p < np; ++p) dst[p] += e[p];
    }
  }
}

struct StageContext {
  const Space& sp;
  const SolverConfig& cfg;
  const Equilibrium& eq;

  void eval(const SpectralState& h, double t_stage, SpectralState& out) const {
    switch (cfg.mode) {
      case RunMode::linear_vfp:
        rhs_fused(sp, h, eq, nullptr, nullptr, nullptr, out);
        break;
      case RunMode::nonlinear: {
        MacroFields mf = compute_moments(sp, h, eq);
        VectorField E = solve_field(sp.grid(), mf.n, eq.delta);
        rhs_fused(sp, h, eq, &E, &E, &h, out);
        break;
      }
      case RunMode::frozen: {
        MacroFields mf = compute_moments(sp, h, eq);
        VectorField E = solve_field(sp.grid(), mf.n, eq.delta);
        SpectralState g = cfg.frozen_source->at(t_stage);
        MacroFields mg = compute_moments(sp, g, eq);
        VectorField Et = solve_field(sp.grid(), mg.n, eq.delta);
        rhs_fused(sp, h, eq, &E, &Et, &g, out);
        break;
      }
    }
  }
};

}  // namespace

SpectralState rhs_nonstiff(const Space& sp, const SpectralState& h, const Equilibrium& eq,
                           const VectorField* E_inject, const VectorField* Et,
                           const SpectralState* g) {
  SpectralState out(h.disc());
  rhs_fused(sp, h, eq, E_inject, Et, g, out);
  return out;
}

void step(const Space& sp, SpectralState& h, double t, double dt, const SolverConfig& cfg,
          const Equilibrium& eq) {
  fp_scale(h, std::exp(-0.5 * dt / cfg.tau));

  StageContext ctx{sp, cfg, eq};
  const Discretization& d = h.disc();
  static thread_local SpectralState k1, k2, k3, k4, tmp;
  if (!(k1.disc() == d)) {
    k1 = SpectralState(d);
    k2 = SpectralState(d);
    k3 = SpectralState(d);
    k4 = SpectralState(d);
    tmp = SpectralState(d);
  }

  ctx.eval(h, t, k1);
  tmp = h;
  state_axpy(0.5 * dt, k1, tmp);
  ctx.eval(tmp, t + 0.5 * dt, k2);
  tmp = h;
  state_axpy(0.5 * dt, k2, tmp);
  ctx.eval(tmp, t + 0.5 * dt, k3);
  tmp = h;
  state_axpy(dt, k3, tmp);
  ctx.eval(tmp, t + dt, k4);

  state_axpy(dt / 6.0, k1, h);
  state_axpy(dt / 3.0, k2, h);
  state_axpy(dt / 3.0, k3, h);
  state_axpy(dt / 6.0, k4, h);

  fp_scale(h, std::exp(-0.5 * dt / cfg.tau));

  double acc = 0.0;
  const double* hd = h.data();
  for (size_t i = 0; i < h.size(); ++i) acc += std::abs(hd[i]);
  if (!std::isfinite(acc))
    throw NumericsError("non-finite state at t = " + std::to_string(t + dt) +
                        ", max |coeff| = " + std::to_string(state_max_abs(h)));
}

Trajectory run(const Space& sp, const SpectralState& h0, const SolverConfig& cfg,
               const Equilibrium& eq, const SampleObserver& observer) {
  cfg.validate(sp.disc());
  const double dt = cfg.resolve_dt(sp.disc());
  const long steps = std::lround(cfg.t_end / dt);

  Trajectory traj;
  SpectralState h = h0;
  const double norm0 = norm_h(sp, h, eq);

  auto record = [&](double t) {
    const VectorField* Eptr = nullptr;
    MacroFields mf;
    if (cfg.mode != RunMode::linear_vfp) {
      mf = compute_macro(sp, h, eq);
      Eptr = &mf.E;
    } else if (cfg.record_fields) {
      // field-free dynamics: moments only, E identically zero
      mf = compute_moments(sp, h, eq);
      mf.E = VectorField(sp.n_x());
    }
    FunctionalSample s;
    if (cfg.light_samples) {
      s.t = t;
      s.w = std::min(1.0, t / cfg.tau);
      s.h2 = inner_product(sp, h, h, eq);
      const double e = Eptr ? grid_l2_vec(*Eptr) : 0.0;
      s.field_energy = cfg.delta * cfg.delta * e * e;
      s.triple_norm_sq = s.h2;
      s.e_functional = s.h2 + s.field_energy;
    } else {
      s = sample_functionals(sp, h, Eptr, cfg.hypo, cfg.tau, cfg.delta, t, eq);
    }
    traj.times.push_back(t);
    traj.samples.push_back(s);
    traj.conserved.push_back(weighted_mass(sp, h, eq));
    if (cfg.record_states) traj.states.push_back(h);
    if (cfg.record_fields) traj.fields.push_back(mf);

    if (std::sqrt(s.h2) > cfg.blowup_factor * std::max(norm0, 1e-300))
      throw NumericsError("possible transient growth: ||h|| exceeded " +
                          std::to_string(cfg.blowup_factor) + " x initial at t = " +
                          std::to_string(t));
    return observer ? observer(t, h, s) : true;
  };

  if (!record(0.0)) return traj;
  for (long k = 0; k < steps; ++k) {
    const double t = dt * static_cast<double>(k);
    step(sp, h, t, dt, cfg, eq);
    const bool at_record = ((k + 1) % cfg.record_every == 0) || (k + 1 == steps);
    if (at_record) {
      if (!record(dt * static_cast<double>(k + 1))) break;
    }
  }
  return traj;
}

SpectralState StateSeries::at(double t) const {
  if (states.empty()) throw Error("empty state series");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  size_t hi = 1;
  while (times[hi] < t) ++hi;
  const size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  const double a = span > 0.0 ? (t - times[lo]) / span : 0.0;
  SpectralState out = states[lo];
  out *= (1.0 - a);
  state_axpy(a, states[hi], out);
  return out;
}

StateSeries StateSeries::from_trajectory(const Trajectory& traj) {
  if (traj.states.empty()) throw Error("trajectory was recorded without states");
  return StateSeries{traj.times, traj.states};
}

namespace ref {

SpectralState rhs_nonstiff(const Space& sp, const SpectralState& h, const Equilibrium& eq,
                           const VectorField* E_inject, const VectorField* Et,
                           const SpectralState* g) {
  const Discretization& d = h.disc();
  SpectralState out = ref::apply_B(sp, h, eq);
  out *= -1.0;
  const int np = d.npts();
  if (E_inject != nullptr) {
    for (int i = 0; i < 2; ++i) {
      double* dst = out.mode(i == 0 ? d.mode_index(1, 0) : d.mode_index(0, 1));
      const double* e = (*E_inject)[i].data();
      for (int p = 0; p < np; ++p) dst[p] += e[p];
    }
  }
  if (Et != nullptr && g != nullptr) {
    StatePair Ag = ref::apply_Astar(*g);
    for (int i = 0; i < 2; ++i) {
      const double* e = (*Et)[i].data();
      for (int m = 0; m < d.modes(); ++m) {
        std::vector<double> prod(static_cast<size_t>(np));
        const double* src = Ag[i].mode(m);
        for (int p = 0; p < np; ++p) prod[static_cast<size_t>(p)] = e[p] * src[p];
        if (d.dealias) sp.grid().dealias(prod.data());
        double* dst = out.mode(m);
        for (int p = 0; p < np; ++p) dst[p] += prod[static_cast<size_t>(p)];
      }
    }
  }
  return out;
}

}  // namespace ref

}  // namespace vpfp
