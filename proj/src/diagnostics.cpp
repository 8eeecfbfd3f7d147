#include "vpfp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vpfp/solver.hpp"

namespace vpfp {

bool HypoParams::beta_admissible(std::string* why) const {
  const double b1 = beta[0], b2 = beta[1], b3 = beta[2];
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (regime == Regime::diffusive) {
    const double lo = std::max(1.0, 0.5 * (b1 + b2));
    const double hi = std::min(2.0 * b1 + 1.0, b2 - 1.0);
    if (!(lo <= b3 + 1e-12 && b3 <= hi + 1e-12))
      return fail("beta violates the diffusive admissibility band [" + std::to_string(lo) +
                  ", " + std::to_string(hi) + "]");
  } else {
    const double hi = std::min(1.0, 0.5 * (b1 + b2));
    const double lo = std::max(2.0 * b1 + 1.0, b2 - 1.0);
    if (!(hi + 1e-12 >= b3 && b3 + 1e-12 >= lo))
      return fail("beta violates the collisional admissibility band [" + std::to_string(lo) +
                  ", " + std::to_string(hi) + "]");
  }
  return true;
}

HypoParams HypoParams::preset(Regime regime, double epsilon) {
  HypoParams p;
  p.regime = regime;
  p.beta = (regime == Regime::diffusive) ? diffusive_beta() : collisional_beta();
  p.gamma = select_gamma(p.beta, epsilon);
  return p;
}

std::array<double, 3> select_gamma(const std::array<double, 3>& beta, double epsilon) {
  (void)beta;  // the recipe is exponent-independent; kept for signature symmetry
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  std::array<double, 3> g{epsilon, epsilon * epsilon, std::pow(epsilon, 1.75)};
  const double margin = 1.0 - g[2] / std::sqrt(g[0] * g[1]);
  if (margin < 0.05)
    std::fprintf(stderr,
                 "warning: gamma equivalence margin %.4f < 0.05; functionals nearly degenerate\n",
                 margin);
  return g;
}

FunctionalSample sample_functionals(const Space& sp, const SpectralState& h,
                                    const VectorField* E, const HypoParams& p, double tau,
                                    double delta, double t, const Equilibrium& eq) {
  NormsBundle nb = norms_bundle(sp, h, eq);
  FunctionalSample s;
  s.t = t;
  s.w = std::min(1.0, t / tau);
  s.h2 = nb.h2;
  s.Ah2 = nb.Ah2;
  s.Ch2 = nb.Ch2;
  s.cross_AC = nb.cross_AC;
  s.A2h2 = nb.A2h2;
  s.ACh2 = nb.ACh2;
  s.AsAh2 = nb.AsAh2;
  const double E2 = E ? grid_l2_vec(*E) : 0.0;
  s.field_energy = delta * delta * E2 * E2;

  const double w = s.w;
  const double tb1 = std::pow(tau, p.beta[0]);
  const double tb2 = std::pow(tau, p.beta[1]);
  const double tb3 = std::pow(tau, p.beta[2]);
  s.triple_norm_sq = s.h2 + p.gamma[0] * tb1 * w * s.Ah2 + p.gamma[1] * tb2 * w * w * w * s.Ch2 +
                     2.0 * p.gamma[2] * tb3 * w * w * s.cross_AC;
  s.e_functional = s.triple_norm_sq + (1.0 + p.gamma[0] * tb1 * w) * s.field_energy;
  s.d_dissipation = s.Ah2 / tau + p.gamma[0] * tb1 / tau * w * s.AsAh2 +
                    p.gamma[1] * tb2 / tau * w * w * w * s.ACh2 +
                    p.gamma[2] * tb3 * w * w * s.Ch2;
  return s;
}

namespace {

// weighted pointwise pairing of two coefficient fields
double pair_fields(const Space& sp, const double* a, const double* b, const Equilibrium& eq) {
  const int np = sp.disc().npts();
  const double* w = eq.rho.data();
  double s = 0.0;
  for (int g = 0; g < np; ++g) s += a[g] * b[g] * w[g];
  return s / np;
}

// <u * field, v> summed over all Hermite modes, field a plain spatial field
double pair_product(const Space& sp, const SpectralState& u, const ScalarField& f,
                    const SpectralState& v, const Equilibrium& eq) {
  const Discretization& d = u.disc();
  const int np = d.npts();
  const double* w = eq.rho.data();
  const double* ff = f.data();
  double s = 0.0;
  for (int m = 0; m < d.modes(); ++m) {
    const double* pu = u.mode(m);
    const double* pv = v.mode(m);
    for (int g = 0; g < np; ++g) s += pu[g] * ff[g] * pv[g] * w[g];
  }
  return s / np;
}

// Quadratic terms of the identities. E = null drops the field contributions
// (field-free linear runs).
QRReport quadratic_terms(const Space& sp, const SpectralState& h, const Equilibrium& eq,
                         double tau, const VectorField* E) {
  QRReport r;
  const Discretization& d = h.disc();

  StatePair Ah = apply_A(h);
  StatePair Ch = apply_C(sp, h);
  std::array<StatePair, 2> ACh{apply_A(Ch[0]), apply_A(Ch[1])};  // ACh[j][i] = A_i C_j h
  std::array<StatePair, 2> AAh{apply_A(Ah[0]), apply_A(Ah[1])};  // AAh[j][i] = A_i A_j h

  for (int i = 0; i < 2; ++i) r.Q_A -= inner_product(sp, Ch[i], Ah[i], eq);

  const ScalarField* hess[2][2] = {{&eq.hess_phi.xx, &eq.hess_phi.xy},
                                   {&eq.hess_phi.xy, &eq.hess_phi.yy}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r.Q_C += pair_product(sp, Ah[j], *hess[i][j], Ch[i], eq);
      r.Qt_AC += pair_product(sp, Ah[j], *hess[i][j], Ah[i], eq);
    }

  if (E != nullptr) {
    std::array<std::array<ScalarField, 2>, 2> dE;  // dE[i][j] = d_i E_j
    for (int j = 0; j < 2; ++j) {
      dE[0][j] = sp.grid().derivative((*E)[j], 0);
      dE[1][j] = sp.grid().derivative((*E)[j], 1);
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const int ej = (j == 0) ? d.mode_index(1, 0) : d.mode_index(0, 1);
        r.Q_C += pair_fields(sp, dE[i][j].data(), Ch[i].mode(ej), eq);
        r.Qt_AC += pair_fields(sp, dE[i][j].data(), Ah[i].mode(ej), eq);
      }
    for (int i = 0; i < 2; ++i)
      r.Qt_AC += pair_fields(sp, (*E)[i].data(), Ch[i].mode(0), eq);
  }

  double cross = 0.0, a2ac = 0.0;
  for (int i = 0; i < 2; ++i) cross += inner_product(sp, Ah[i], Ch[i], eq);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) a2ac += inner_product(sp, AAh[j][i], ACh[j][i], eq);
  r.Q_AC = -(cross + 2.0 * a2ac) / tau + r.Qt_AC;
  return r;
}

void add_trilinear_terms(const Space& sp, const SpectralState& h, const SpectralState& g,
                         const SpectralState& g_tilde, const Equilibrium& eq, QRReport& r) {
  const double gt_mass = weighted_mass(sp, g_tilde, eq);
  if (std::abs(gt_mass) > 1e-9)
    throw ConfigError("compute_QR_terms: g_tilde is not mean-free");
  MacroFields mg = compute_moments(sp, g_tilde, eq);
  VectorField Et = solve_field(sp.grid(), mg.n, eq.delta);
  std::array<std::array<ScalarField, 2>, 2> dEt;  // dEt[i][j] = d_i Et_j
  for (int j = 0; j < 2; ++j) {
    dEt[0][j] = sp.grid().derivative(Et[j], 0);
    dEt[1][j] = sp.grid().derivative(Et[j], 1);
  }

  StatePair Ah = apply_A(h);
  StatePair Ch = apply_C(sp, h);
  std::array<StatePair, 2> ACh{apply_A(Ch[0]), apply_A(Ch[1])};
  std::array<StatePair, 2> AAh{apply_A(Ah[0]), apply_A(Ah[1])};
  StatePair Ag = apply_A(g);
  StatePair Cg = apply_C(sp, g);

  for (int i = 0; i < 2; ++i) r.R_0 += pair_product(sp, Ah[i], Et[i], g, eq);

  r.R_A = r.R_0;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) r.R_A += pair_product(sp, AAh[j][i], Et[j], Ag[i], eq);

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r.R_C += pair_product(sp, ACh[i][j], Et[j], Cg[i], eq);
      r.R_C += pair_product(sp, ACh[i][j], dEt[i][j], g, eq);
      r.R_AC += pair_product(sp, AAh[i][j], Et[j], Cg[i], eq);
      r.R_AC += pair_product(sp, AAh[i][j], dEt[i][j], g, eq);
      r.R_AC += pair_product(sp, ACh[i][j], Et[j], Ag[i], eq);
    }
  for (int i = 0; i < 2; ++i) r.R_AC += pair_product(sp, Ch[i], Et[i], g, eq);
}

}  // namespace

QRReport compute_QR_terms(const Space& sp, const SpectralState& h, const SpectralState& g,
                          const SpectralState& g_tilde, const Equilibrium& eq, double delta,
                          double tau) {
  MacroFields mf = compute_moments(sp, h, eq);
  VectorField E = solve_field(sp.grid(), mf.n, eq.delta);
  QRReport r = quadratic_terms(sp, h, eq, tau, &E);
  add_trilinear_terms(sp, h, g, g_tilde, eq, r);
  return r;
}

ResidualSeries energy_identity_residuals(const Space& sp, const Trajectory& traj,
                                         const Equilibrium& eq, const SolverConfig& cfg) {
  const size_t K = traj.states.size();
  if (K < 3) throw ConfigError("energy_identity_residuals needs >= 3 recorded states");
  if (traj.states.size() != traj.times.size())
    throw ConfigError("trajectory states/times misaligned");
  if (cfg.mode == RunMode::frozen)
    throw ConfigError("energy_identity_residuals does not support frozen runs");
  const bool nonlinear = cfg.mode == RunMode::nonlinear;

  struct Point {
    NormsBundle nb;
    double E2 = 0;  // delta^2 ||E||^2
    QRReport qr;
  };
  std::vector<Point> pts(K);
  for (size_t k = 0; k < K; ++k) {
    const SpectralState& h = traj.states[k];
    pts[k].nb = norms_bundle(sp, h, eq);
    if (nonlinear) {
      pts[k].qr = compute_QR_terms(sp, h, h, h, eq, cfg.delta, cfg.tau);
      MacroFields mf = compute_moments(sp, h, eq);
      VectorField E = solve_field(sp.grid(), mf.n, eq.delta);
      const double e = grid_l2_vec(E);
      pts[k].E2 = cfg.delta * cfg.delta * e * e;
    } else {
      pts[k].qr = quadratic_terms(sp, h, eq, cfg.tau, nullptr);
    }
  }

  ResidualSeries rs;
  std::array<double, 4> scale{0, 0, 0, 0};
  for (size_t k = 1; k + 1 < K; ++k) {
    const double dt2 = traj.times[k + 1] - traj.times[k - 1];
    const Point &pm = pts[k - 1], &p0 = pts[k], &pp = pts[k + 1];
    const double tau = cfg.tau;

    const double dF1 = (0.5 * (pp.nb.h2 + pp.E2) - 0.5 * (pm.nb.h2 + pm.E2)) / dt2;
    const double rhs1 = -p0.nb.Ah2 / tau + p0.qr.R_0;
    const double dF2 = (0.5 * (pp.nb.Ah2 + pp.E2) - 0.5 * (pm.nb.Ah2 + pm.E2)) / dt2;
    const double rhs2 = -(p0.nb.Ah2 + p0.nb.A2h2) / tau + p0.qr.Q_A + p0.qr.R_A;
    const double dF3 = (0.5 * pp.nb.Ch2 - 0.5 * pm.nb.Ch2) / dt2;
    const double rhs3 = -p0.nb.ACh2 / tau + p0.qr.Q_C + p0.qr.R_C;
    const double dF4 = (pp.nb.cross_AC - pm.nb.cross_AC) / dt2;
    const double rhs4 = -p0.nb.Ch2 + p0.qr.Q_AC + p0.qr.R_AC;

    rs.t.push_back(traj.times[k]);
    const std::array<double, 4> res{dF1 - rhs1, dF2 - rhs2, dF3 - rhs3, dF4 - rhs4};
    const std::array<double, 4> mag{
        std::abs(dF1) + std::abs(p0.nb.Ah2 / tau) + std::abs(p0.qr.R_0),
        std::abs(dF2) + std::abs((p0.nb.Ah2 + p0.nb.A2h2) / tau) + std::abs(p0.qr.Q_A) +
            std::abs(p0.qr.R_A),
        std::abs(dF3) + std::abs(p0.nb.ACh2 / tau) + std::abs(p0.qr.Q_C) + std::abs(p0.qr.R_C),
        std::abs(dF4) + std::abs(p0.nb.Ch2) + std::abs(p0.qr.Q_AC) + std::abs(p0.qr.R_AC)};
    for (int i = 0; i < 4; ++i) {
      rs.residual[i].push_back(res[i]);
      scale[i] = std::max(scale[i], mag[i]);
    }
  }

  for (int i = 0; i < 4; ++i) {
    double mx = 0.0, ss = 0.0;
    for (double r : rs.residual[i]) {
      mx = std::max(mx, std::abs(r));
      ss += r * r;
    }
    const double s = scale[i] > 0.0 ? scale[i] : 1.0;
    rs.max_rel[i] = mx / s;
    rs.rms_rel[i] = std::sqrt(ss / rs.residual[i].size()) / s;
  }
  return rs;
}

RateFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& value,
                       double t_min, double t_max) {
  RateFit fit;
  fit.t_min = t_min;
  fit.t_max = t_max;
  std::vector<double> xs, ys;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min || t[i] > t_max) continue;
    if (!(value[i] > 0.0))
      throw ConfigError("fit_decay_rate: nonpositive value inside the fit window");
    xs.push_back(t[i]);
    ys.push_back(-std::log(value[i]));
  }
  if (xs.size() < 5) throw ConfigError("fit_decay_rate: fewer than 5 points in the window");
  fit.n_points = static_cast<int>(xs.size());
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
  fit.rate = sxy / sxx;
  fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double poincare_ratio(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  NormsBundle nb = norms_bundle(sp, h, eq);
  const double den = nb.Ah2 + nb.Ch2;
  if (den <= 1e-28 * std::max(nb.h2, 1.0))
    throw ConfigError("poincare_ratio: denominator vanishes (constant state)");
  return nb.h2 / den;
}

double min_dissipation_ratio(const std::vector<FunctionalSample>& samples,
                             const HypoParams& p, double tau) {
  const double lam =
      std::min({1.0 / tau, std::pow(tau, p.beta[2]), std::pow(tau, p.beta[2] - p.beta[1])});
  double kmin = std::numeric_limits<double>::infinity();
  for (const FunctionalSample& s : samples) {
    if (s.t < tau) continue;
    const double base =
        s.h2 + std::pow(tau, p.beta[0]) * s.Ah2 + std::pow(tau, p.beta[1]) * s.Ch2;
    if (base <= 0.0) continue;
    kmin = std::min(kmin, s.d_dissipation / (lam * base));
  }
  return std::isfinite(kmin) ? kmin : 0.0;
}

}  // namespace vpfp
