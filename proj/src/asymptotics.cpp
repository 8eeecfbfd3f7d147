#include "vpfp/asymptotics.hpp"

#include <cmath>
#include <cstdio>

#include "vpfp/diagnostics.hpp"

namespace vpfp {

double TimeRefRule::t_ref(double tau) const {
  switch (kind) {
    case Kind::inv_tau:
      return 1.0 / tau;
    case Kind::tau:
      return tau;
    case Kind::power:
      return std::pow(tau, param);
    case Kind::fixed:
      return param;
  }
  return 1.0;
}

std::string TimeRefRule::describe() const {
  char buf[64];
  switch (kind) {
    case Kind::inv_tau:
      return "inv_tau";
    case Kind::tau:
      return "tau";
    case Kind::power:
      std::snprintf(buf, sizeof(buf), "power:%g", param);
      return buf;
    case Kind::fixed:
      std::snprintf(buf, sizeof(buf), "fixed:%g", param);
      return buf;
  }
  return "?";
}

TimeRefRule TimeRefRule::parse(const std::string& text) {
  TimeRefRule r;
  if (text == "inv_tau") {
    r.kind = Kind::inv_tau;
  } else if (text == "tau") {
    r.kind = Kind::tau;
  } else if (text.rfind("power:", 0) == 0) {
    r.kind = Kind::power;
    r.param = std::stod(text.substr(6));
  } else if (text.rfind("fixed:", 0) == 0) {
    r.kind = Kind::fixed;
    r.param = std::stod(text.substr(6));
    if (r.param <= 0.0) throw ConfigError("fixed t_ref must be positive");
  } else {
    throw ConfigError("unknown t_ref rule '" + text +
                      "' (expected inv_tau, tau, power:A or fixed:T)");
  }
  return r;
}

TimeRefRule TimeRefRule::for_regime(int regime) {
  TimeRefRule r;
  switch (regime) {
    case 1:
      r.kind = Kind::power;
      r.param = -2.0;
      break;
    case 2:
      r.kind = Kind::inv_tau;
      break;
    case 3:
      r.kind = Kind::fixed;
      r.param = 1.0;
      break;
    case 4:
      r.kind = Kind::tau;
      break;
    case 5:
      r.kind = Kind::power;
      r.param = 2.0;
      break;
    default:
      throw ConfigError("regime must be 1..5");
  }
  return r;
}

DensityTrajectory solve_drift_diffusion(const SpectralGrid& grid, const ScalarField& rho0,
                                        const DensityField& rho_star, double delta,
                                        const DriftDiffusionConfig& cfg) {
  if (cfg.dt <= 0.0 || cfg.t_end <= 0.0) throw ConfigError("drift-diffusion dt and t_end must be positive");
  const int n = grid.n();
  if (rho0.n != n || rho_star.rho.n != n) throw ConfigError("drift-diffusion grids do not match");
  const long steps = std::max(1L, std::lround(cfg.t_end / cfg.dt));
  const double dt = cfg.t_end / static_cast<double>(steps);
  const int nk = grid.nk();
  const double* lap = grid.laplace_mult();

  auto drift_hat = [&](const ScalarField& rho, std::vector<Cplx>& out, VectorField* Eout) {
    ScalarField src(n);
    for (size_t i = 0; i < src.size(); ++i) src.v[i] = rho.v[i] - rho_star.rho.v[i];
    ScalarField psi = grid.poisson(src, delta);
    VectorField E = grid.gradient(psi);
    VectorField flux(n);
    for (int c = 0; c < 2; ++c)
      for (size_t i = 0; i < E[c].size(); ++i) {
        E[c].v[i] = -E[c].v[i];
        flux[c].v[i] = E[c].v[i] * rho.v[i];
      }
    if (cfg.dealias) {
      grid.dealias(flux[0]);
      grid.dealias(flux[1]);
    }
    // out = -div(E rho) in spectral space
    std::vector<Cplx> f0(static_cast<size_t>(nk)), f1(static_cast<size_t>(nk));
    grid.forward(flux[0].data(), f0.data());
    grid.forward(flux[1].data(), f1.data());
    const double* d1 = grid.deriv_mult(0);
    const double* d2 = grid.deriv_mult(1);
    out.resize(static_cast<size_t>(nk));
    for (int ik = 0; ik < nk; ++ik)
      out[static_cast<size_t>(ik)] = Cplx(0.0, -d1[ik]) * f0[static_cast<size_t>(ik)] +
                                     Cplx(0.0, -d2[ik]) * f1[static_cast<size_t>(ik)];
    if (Eout) *Eout = E;
  };

  DensityTrajectory out;
  ScalarField rho = rho0;
  std::vector<Cplx> rho_hat(static_cast<size_t>(nk));
  grid.forward(rho.data(), rho_hat.data());
  std::vector<Cplx> N_prev, N_cur;

  auto record = [&](double t) {
    VectorField E(n);
    std::vector<Cplx> tmp;
    drift_hat(rho, tmp, &E);
    out.times.push_back(t);
    out.rho.push_back(rho);
    out.E.push_back(E);
  };
  record(0.0);

  for (long k = 0; k < steps; ++k) {
    drift_hat(rho, N_cur, nullptr);
    std::vector<Cplx> rhs(static_cast<size_t>(nk));
    if (k == 0) {
      // IMEX Euler startup
      for (int ik = 0; ik < nk; ++ik)
        rhs[static_cast<size_t>(ik)] =
            rho_hat[static_cast<size_t>(ik)] + dt * N_cur[static_cast<size_t>(ik)];
      for (int ik = 0; ik < nk; ++ik)
        rho_hat[static_cast<size_t>(ik)] = rhs[static_cast<size_t>(ik)] / (1.0 - dt * lap[ik]);
    } else {
      // Crank-Nicolson diffusion + AB2 drift
      for (int ik = 0; ik < nk; ++ik)
        rhs[static_cast<size_t>(ik)] =
            (1.0 + 0.5 * dt * lap[ik]) * rho_hat[static_cast<size_t>(ik)] +
            dt * (1.5 * N_cur[static_cast<size_t>(ik)] - 0.5 * N_prev[static_cast<size_t>(ik)]);
      for (int ik = 0; ik < nk; ++ik)
        rho_hat[static_cast<size_t>(ik)] = rhs[static_cast<size_t>(ik)] / (1.0 - 0.5 * dt * lap[ik]);
    }
    N_prev = N_cur;
    grid.backward(rho_hat.data(), rho.data());
    if (!grid_finite(rho))
      throw NumericsError("drift-diffusion solution lost finiteness at t = " +
                          std::to_string(dt * (k + 1)));
    if ((k + 1) % cfg.record_every == 0 || k + 1 == steps)
      record(dt * static_cast<double>(k + 1));
  }
  return out;
}

SpectralState homogeneous_fp_at(const SpectralState& h0, double scaled_time) {
  SpectralState out = h0;
  fp_scale(out, std::exp(-scaled_time));
  return out;
}

std::vector<SpectralState> solve_homogeneous_fp(const SpectralState& h0, double time_scale,
                                                const std::vector<double>& times) {
  std::vector<SpectralState> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(homogeneous_fp_at(h0, t / time_scale));
  return out;
}

Trajectory run_rescaled(const Space& sp, const SpectralState& h0, const SolverConfig& base,
                        double tau, double t_ref, double horizon, double record_ds,
                        const Equilibrium& eq, const SampleObserver& observer) {
  SolverConfig cfg = base;
  cfg.tau = tau;
  cfg.t_end = horizon * t_ref;
  const double dt = cfg.resolve_dt(sp.disc());
  cfg.record_every = std::max(1, static_cast<int>(std::lround(record_ds * t_ref / dt)));

  SampleObserver wrapped;
  if (observer)
    wrapped = [&](double t, const SpectralState& h, const FunctionalSample& s) {
      FunctionalSample sr = s;
      sr.t = t / t_ref;
      return observer(t / t_ref, h, sr);
    };

  Trajectory traj = run(sp, h0, cfg, eq, wrapped);
  for (double& t : traj.times) t /= t_ref;
  for (FunctionalSample& s : traj.samples) s.t /= t_ref;
  return traj;
}

MomentResiduals moment_residuals(const Space& sp, const Trajectory& traj, double tau,
                                 double t_ref, const Equilibrium& eq) {
  const size_t K = traj.fields.size();
  if (K < 3) throw ConfigError("moment_residuals needs >= 3 samples with recorded fields");
  const SpectralGrid& grid = sp.grid();
  const int n = grid.n();

  MomentResiduals mr;
  std::vector<ScalarField> divj(K);
  for (size_t k = 0; k < K; ++k) {
    const MacroFields& mf = traj.fields[k];
    ScalarField d0 = grid.derivative(mf.j[0], 0);
    ScalarField d1 = grid.derivative(mf.j[1], 1);
    divj[k] = ScalarField(n);
    for (size_t i = 0; i < divj[k].size(); ++i) divj[k].v[i] = d0.v[i] + d1.v[i];
    ScalarField nt(n);
    for (size_t i = 0; i < nt.size(); ++i) nt.v[i] = mf.n.v[i] - tau * divj[k].v[i];
    mr.n_tilde.push_back(nt);
  }

  for (size_t k = 1; k + 1 < K; ++k) {
    const double dt2 = traj.times[k + 1] - traj.times[k - 1];
    const MacroFields& m0 = traj.fields[k];

    ScalarField rc(n);
    for (size_t i = 0; i < rc.size(); ++i)
      rc.v[i] = (traj.fields[k + 1].n.v[i] - traj.fields[k - 1].n.v[i]) / dt2 +
                t_ref * divj[k].v[i];

    // momentum: (1/t_ref) dj/dt + (1/tau) j - n E_inf - (rho_inf + n) E + grad n + div S
    VectorField rm(n);
    ScalarField gn0 = grid.derivative(m0.n, 0);
    ScalarField gn1 = grid.derivative(m0.n, 1);
    ScalarField ds0a = grid.derivative(m0.S.xx, 0);
    ScalarField ds0b = grid.derivative(m0.S.xy, 1);
    ScalarField ds1a = grid.derivative(m0.S.xy, 0);
    ScalarField ds1b = grid.derivative(m0.S.yy, 1);
    for (size_t i = 0; i < rm[0].size(); ++i) {
      const double Einf0 = -eq.grad_phi[0].v[i];
      const double Einf1 = -eq.grad_phi[1].v[i];
      const double nn = m0.n.v[i];
      const double rinf = eq.rho.v[i];
      rm[0].v[i] = (traj.fields[k + 1].j[0].v[i] - traj.fields[k - 1].j[0].v[i]) / (dt2 * t_ref) +
                   m0.j[0].v[i] / tau - nn * Einf0 - (rinf + nn) * m0.E[0].v[i] + gn0.v[i] +
                   ds0a.v[i] + ds0b.v[i];
      rm[1].v[i] = (traj.fields[k + 1].j[1].v[i] - traj.fields[k - 1].j[1].v[i]) / (dt2 * t_ref) +
                   m0.j[1].v[i] / tau - nn * Einf1 - (rinf + nn) * m0.E[1].v[i] + gn1.v[i] +
                   ds1a.v[i] + ds1b.v[i];
    }
    mr.t.push_back(traj.times[k]);
    mr.continuity.push_back(grid_l2(rc));
    mr.momentum.push_back(grid_l2_vec(rm));
  }
  return mr;
}

std::pair<double, double> fit_convergence_order(const std::vector<double>& taus,
                                                const std::vector<double>& errors) {
  if (taus.size() != errors.size() || taus.size() < 3)
    throw ConfigError("fit_convergence_order needs >= 3 (tau, error) pairs");
  std::vector<double> xs, ys;
  for (size_t i = 0; i < taus.size(); ++i) {
    if (!(errors[i] > 0.0)) throw ConfigError("fit_convergence_order: nonpositive error");
    xs.push_back(std::log(taus[i]));
    ys.push_back(std::log(errors[i]));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double order = sxy / sxx;
  const double r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return {order, r2};
}

namespace {

// H-norm of the difference between h and a pure density state target00 * psi_0
double norm_against_density(const Space& sp, const SpectralState& h, const ScalarField& target00,
                            const Equilibrium& eq) {
  const Discretization& d = h.disc();
  const int np = d.npts();
  const double* w = eq.rho.data();
  double s = 0.0;
  for (int m = 0; m < d.modes(); ++m) {
    const double* p = h.mode(m);
    if (m == 0) {
      for (int g = 0; g < np; ++g) {
        const double diff = p[g] - target00.v[g];
        s += diff * diff * w[g];
      }
    } else {
      for (int g = 0; g < np; ++g) s += p[g] * p[g] * w[g];
    }
  }
  return std::sqrt(s / np);
}

double norm_diff(const Space& sp, const SpectralState& a, const SpectralState& b,
                 const Equilibrium& eq) {
  SpectralState d = a;
  d -= b;
  return norm_h(sp, d, eq);
}

// ||h - h_00 psi_0||, the non-Maxwellian content
double kinetic_norm(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  const Discretization& d = h.disc();
  const int np = d.npts();
  const double* w = eq.rho.data();
  double s = 0.0;
  for (int m = 1; m < d.modes(); ++m) {
    const double* p = h.mode(m);
    for (int g = 0; g < np; ++g) s += p[g] * p[g] * w[g];
  }
  return std::sqrt(s / np);
}

}  // namespace

RegimeReport run_regime_study(const RegimeStudyConfig& cfg) {
  if (cfg.tau_list.empty()) throw ConfigError("asymptotics needs a tau list");
  Space sp(cfg.disc);
  Equilibrium eq = Equilibrium::flat(cfg.disc.n_x, cfg.delta);

  TimeRefRule rule = cfg.rule_set ? cfg.rule : TimeRefRule::for_regime(cfg.regime);

  RegimeReport rep;
  rep.regime = cfg.regime;
  rep.rule = rule.describe();
  rep.horizon = cfg.horizon;

  SpectralState h0 = make_initial_data(sp, cfg.init, eq);

  SolverConfig base;
  base.delta = cfg.delta;
  base.cfl = cfg.cfl;
  base.mode = RunMode::nonlinear;
  base.light_samples = true;

  for (double tau : cfg.tau_list) {
    const double t_ref = rule.t_ref(tau);
    const double H = cfg.horizon;
    rep.taus.push_back(tau);

    switch (cfg.regime) {
      case 1: {
        Trajectory traj = run_rescaled(sp, h0, base, tau, t_ref, H, H / 400.0, eq);
        std::vector<double> norms;
        norms.reserve(traj.samples.size());
        for (const FunctionalSample& s : traj.samples) norms.push_back(std::sqrt(s.h2));
        RateFit fit = fit_decay_rate(traj.times, norms, 0.1 * H, H);
        rep.rates.push_back(fit.rate);
        rep.errors.push_back(fit.rate > 0.0 ? 1.0 / fit.rate : 0.0);
        break;
      }
      case 2: {  // diffusion limit, t_ref = 1/tau
        std::vector<double> ts, eps;
        std::vector<double> coarse_t;
        std::vector<ScalarField> coarse_n, coarse_nt;
        const int coarse_stride = 8;
        int idx = 0;
        auto obs = [&](double t, const SpectralState& h, const FunctionalSample&) {
          ts.push_back(t);
          eps.push_back(kinetic_norm(sp, h, eq));
          if (idx % coarse_stride == 0) {
            MacroFields mf = compute_moments(sp, h, eq);
            ScalarField d0 = sp.grid().derivative(mf.j[0], 0);
            ScalarField d1 = sp.grid().derivative(mf.j[1], 1);
            ScalarField nt = mf.n;
            for (size_t i = 0; i < nt.size(); ++i) nt.v[i] -= tau * (d0.v[i] + d1.v[i]);
            coarse_t.push_back(t);
            coarse_n.push_back(mf.n);
            coarse_nt.push_back(nt);
          }
          ++idx;
          return true;
        };
        run_rescaled(sp, h0, base, tau, t_ref, H, H / 800.0, eq, obs);

        // L2-in-time norm of the kinetic remainder, truncated where decayed
        double emax = 0.0;
        for (double e : eps) emax = std::max(emax, e);
        size_t last = eps.size();
        while (last > 1 && eps[last - 1] < 1e-8 * emax) --last;
        double integral = 0.0;
        for (size_t i = 1; i < last; ++i)
          integral += 0.5 * (eps[i] * eps[i] + eps[i - 1] * eps[i - 1]) * (ts[i] - ts[i - 1]);
        rep.errors.push_back(std::sqrt(integral));

        // drift-diffusion comparison on the coarse sample times
        MacroFields mf0 = compute_moments(sp, h0, eq);
        ScalarField rho0(cfg.disc.n_x);
        for (size_t i = 0; i < rho0.size(); ++i) rho0.v[i] = eq.rho.v[i] + mf0.n.v[i];
        DriftDiffusionConfig ddc;
        const double coarse_ds = coarse_t.size() > 1 ? coarse_t[1] - coarse_t[0] : H;
        const int sub = std::max(1, static_cast<int>(std::ceil(coarse_ds / cfg.dd_dt)));
        ddc.dt = coarse_ds / sub;
        ddc.record_every = sub;
        ddc.t_end = coarse_t.back();
        DensityField rs_flat = DensityField::validated(ScalarField(cfg.disc.n_x, 1.0));
        DensityTrajectory dd = solve_drift_diffusion(sp.grid(), rho0, rs_flat, cfg.delta, ddc);

        double err_nt = 0.0, err_n = 0.0;
        for (size_t k = 0; k < coarse_t.size(); ++k) {
          // locate the dd record at this time
          size_t j = 0;
          double best = 1e300;
          for (size_t q = 0; q < dd.times.size(); ++q) {
            const double dtq = std::abs(dd.times[q] - coarse_t[k]);
            if (dtq < best) {
              best = dtq;
              j = q;
            }
          }
          ScalarField n_as(cfg.disc.n_x);
          for (size_t i = 0; i < n_as.size(); ++i) n_as.v[i] = dd.rho[j].v[i] - eq.rho.v[i];
          ScalarField dn = coarse_nt[k];
          for (size_t i = 0; i < dn.size(); ++i) dn.v[i] -= n_as.v[i];
          err_nt = std::max(err_nt, grid_l2(dn));
          ScalarField dn2 = coarse_n[k];
          for (size_t i = 0; i < dn2.size(); ++i) dn2.v[i] -= n_as.v[i];
          err_n = std::max(err_n, grid_l2(dn2));
        }
        rep.err_density.push_back(err_n);
        rep.err_ntilde.push_back(err_nt);
        break;
      }
      case 3: {  // frozen density, t_ref fixed
        SpectralState target(sp.disc());
        {
          const double* h00 = h0.mode(0);
          double* t00 = target.mode(0);
          // target h = rho_0 e^{phi} - 1 with rho_0 = e^{-phi}(1 + h_00(0))
          for (int g = 0; g < cfg.disc.npts(); ++g) t00[g] = h00[g];
        }
        double err = 0.0;
        auto obs = [&](double t, const SpectralState& h, const FunctionalSample&) {
          if (t >= 0.25 * H) err = std::max(err, norm_diff(sp, h, target, eq));
          return true;
        };
        run_rescaled(sp, h0, base, tau, t_ref, H, H / 200.0, eq, obs);
        rep.errors.push_back(err);
        break;
      }
      case 4: {  // homogeneous relaxation, t_ref = tau
        double err = 0.0;
        auto obs = [&](double t, const SpectralState& h, const FunctionalSample&) {
          SpectralState target = homogeneous_fp_at(h0, t);
          err = std::max(err, norm_diff(sp, h, target, eq));
          return true;
        };
        run_rescaled(sp, h0, base, tau, t_ref, H, H / 200.0, eq, obs);
        rep.errors.push_back(err);
        break;
      }
      case 5: {  // frozen initial data, t_ref = tau^2
        double err = 0.0;
        auto obs = [&](double t, const SpectralState& h, const FunctionalSample&) {
          err = std::max(err, norm_diff(sp, h, h0, eq));
          return true;
        };
        run_rescaled(sp, h0, base, tau, t_ref, H, H / 200.0, eq, obs);
        rep.errors.push_back(err);
        break;
      }
      default:
        throw ConfigError("regime must be 1..5");
    }
  }

  if (cfg.regime == 1) {
    rep.monotone = true;
    for (size_t k = 1; k < rep.rates.size(); ++k)
      if (!(rep.rates[k] > rep.rates[k - 1])) rep.monotone = false;
  } else {
    rep.monotone = true;
    for (size_t k = 1; k < rep.errors.size(); ++k)
      if (!(rep.errors[k] < rep.errors[k - 1])) rep.monotone = false;
  }

  if (rep.errors.size() >= 3) {
    auto [o, r2] = fit_convergence_order(rep.taus, rep.errors);
    rep.order = o;
    rep.r_squared = r2;
  }
  if (rep.err_ntilde.size() >= 3) {
    auto [o, r2] = fit_convergence_order(rep.taus, rep.err_ntilde);
    rep.order_ntilde = o;
    rep.r2_ntilde = r2;
  }
  return rep;
}

}  // namespace vpfp
