#include "vpfp/operators.hpp"

#include <cmath>
#include <cstring>

#include "vpfp/parallel.hpp"
#include "vpfp/rng.hpp"

namespace vpfp {

namespace {

inline double ip_block(const SpectralState& a, const SpectralState& b, const Equilibrium& eq,
                       int m) {
  const double* pa = a.mode(m);
  const double* pb = b.mode(m);
  const double* w = eq.rho.data();
  const int np = a.disc().npts();
  double s = 0.0;
  for (int g = 0; g < np; ++g) s += pa[g] * pb[g] * w[g];
  return s;
}

}  // namespace

StatePair apply_A(const SpectralState& h) {
  const Discretization& d = h.disc();
  StatePair out{SpectralState(d), SpectralState(d)};
  const int nv = d.n_v, np = d.npts();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < d.modes(); ++m) {
    const int m1 = m / nv, m2 = m % nv;
    if (m1 + 1 < nv) {
      const double f = std::sqrt(m1 + 1.0);
      const double* src = h.mode(m1 + 1, m2);
      double* dst = out[0].mode(m);
      for (int g = 0; g < np; ++g) dst[g] = f * src[g];
    }
    if (m2 + 1 < nv) {
      const double f = std::sqrt(m2 + 1.0);
      const double* src = h.mode(m1, m2 + 1);
      double* dst = out[1].mode(m);
      for (int g = 0; g < np; ++g) dst[g] = f * src[g];
    }
  }
  return out;
}

StatePair apply_Astar(const SpectralState& h) {
  const Discretization& d = h.disc();
  StatePair out{SpectralState(d), SpectralState(d)};
  const int nv = d.n_v, np = d.npts();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < d.modes(); ++m) {
    const int m1 = m / nv, m2 = m % nv;
    if (m1 > 0) {
      const double f = std::sqrt(static_cast<double>(m1));
      const double* src = h.mode(m1 - 1, m2);
      double* dst = out[0].mode(m);
      for (int g = 0; g < np; ++g) dst[g] = f * src[g];
    }
    if (m2 > 0) {
      const double f = std::sqrt(static_cast<double>(m2));
      const double* src = h.mode(m1, m2 - 1);
      double* dst = out[1].mode(m);
      for (int g = 0; g < np; ++g) dst[g] = f * src[g];
    }
  }
  return out;
}

StatePair apply_C(const Space& sp, const SpectralState& h) {
  const Discretization& d = h.disc();
  StatePair out{SpectralState(d), SpectralState(d)};
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < d.modes(); ++m)
    sp.grid().derivative(h.mode(m), out[0].mode(m), out[1].mode(m));
  return out;
}

SpectralState apply_B(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  const Discretization& d = h.disc();
  StatePair dx = apply_C(sp, h);
  SpectralState out(d);
  const int nv = d.n_v, np = d.npts();
  const bool mask = d.dealias;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < d.modes(); ++m) {
    const int m1 = m / nv, m2 = m % nv;
    double* dst = out.mode(m);
    // (A_i + A*_i) applied to the derivative states
    if (m1 + 1 < nv) {
      const double f = std::sqrt(m1 + 1.0);
      const double* src = dx[0].mode(m1 + 1, m2);
      for (int g = 0; g < np; ++g) dst[g] += f * src[g];
    }
    if (m1 > 0) {
      const double f = std::sqrt(static_cast<double>(m1));
      const double* src = dx[0].mode(m1 - 1, m2);
      for (int g = 0; g < np; ++g) dst[g] += f * src[g];
    }
    if (m2 + 1 < nv) {
      const double f = std::sqrt(m2 + 1.0);
      const double* src = dx[1].mode(m1, m2 + 1);
      for (int g = 0; g < np; ++g) dst[g] += f * src[g];
    }
    if (m2 > 0) {
      const double f = std::sqrt(static_cast<double>(m2));
      const double* src = dx[1].mode(m1, m2 - 1);
      for (int g = 0; g < np; ++g) dst[g] += f * src[g];
    }
    if (!eq.uniform) {
      // - grad(phi) . A h, pointwise product per component
      std::vector<double> prod(static_cast<size_t>(np), 0.0);
      bool any = false;
      if (m1 + 1 < nv) {
        const double f = std::sqrt(m1 + 1.0);
        const double* src = h.mode(m1 + 1, m2);
        const double* w = eq.grad_phi[0].data();
        for (int g = 0; g < np; ++g) prod[static_cast<size_t>(g)] += f * w[g] * src[g];
        any = true;
      }
      if (m2 + 1 < nv) {
        const double f = std::sqrt(m2 + 1.0);
        const double* src = h.mode(m1, m2 + 1);
        const double* w = eq.grad_phi[1].data();
        for (int g = 0; g < np; ++g) prod[static_cast<size_t>(g)] += f * w[g] * src[g];
        any = true;
      }
      if (any) {
        if (mask) sp.grid().dealias(prod.data());
        for (int g = 0; g < np; ++g) dst[g] -= prod[static_cast<size_t>(g)];
      }
    }
  }
  return out;
}

SpectralState apply_FP(const SpectralState& h) {
  const Discretization& d = h.disc();
  SpectralState out(d);
  const int nv = d.n_v, np = d.npts();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < d.modes(); ++m) {
    const double lam = static_cast<double>(m / nv + m % nv);
    const double* src = h.mode(m);
    double* dst = out.mode(m);
    for (int g = 0; g < np; ++g) dst[g] = lam * src[g];
  }
  return out;
}

void fp_scale(SpectralState& h, double factor) {
  const Discretization& d = h.disc();
  const int nv = d.n_v, np = d.npts();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < d.modes(); ++m) {
    const int shell = m / nv + m % nv;
    if (shell == 0) continue;
    const double f = std::pow(factor, shell);
    double* p = h.mode(m);
    for (int g = 0; g < np; ++g) p[g] *= f;
  }
}

double inner_product(const Space& sp, const SpectralState& a, const SpectralState& b,
                     const Equilibrium& eq) {
  const Discretization& d = a.disc();
  const double s =
      ordered_sum(d.modes(), [&](int m) { return ip_block(a, b, eq, m); });
  return s / d.npts();
}

double weighted_mass(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  const double* p = h.mode(0);
  const double* w = eq.rho.data();
  const int np = h.disc().npts();
  double s = 0.0;
  for (int g = 0; g < np; ++g) s += p[g] * w[g];
  return s / np;
}

void project_mean_free(const Space& sp, SpectralState& h, const Equilibrium& eq) {
  const double mass = weighted_mass(sp, h, eq);
  const double unit = grid_mean(eq.rho);  // <1,1> = int e^{-phi}, 1 by construction
  const double c = mass / unit;
  double* p = h.mode(0);
  const int np = h.disc().npts();
  for (int g = 0; g < np; ++g) p[g] -= c;
}

NormsBundle norms_bundle(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  NormsBundle nb;
  const Discretization& d = h.disc();
  const int nv = d.n_v;

  nb.h2 = inner_product(sp, h, h, eq);

  // ||Ah||^2 and ||A*.Ah||^2 are diagonal in the Hermite index
  {
    const double s1 = ordered_sum(d.modes(), [&](int m) {
      const int shell = m / nv + m % nv;
      return shell * ip_block(h, h, eq, m);
    });
    const double s2 = ordered_sum(d.modes(), [&](int m) {
      const double shell = static_cast<double>(m / nv + m % nv);
      return shell * shell * ip_block(h, h, eq, m);
    });
    nb.Ah2 = s1 / d.npts();
    nb.AsAh2 = s2 / d.npts();
  }

  StatePair Ch = apply_C(sp, h);
  StatePair Ah = apply_A(h);
  for (int i = 0; i < 2; ++i) {
    nb.Ch2 += inner_product(sp, Ch[i], Ch[i], eq);
    nb.cross_AC += inner_product(sp, Ah[i], Ch[i], eq);
  }
  for (int j = 0; j < 2; ++j) {
    StatePair AAj = apply_A(Ah[j]);
    StatePair ACj = apply_A(Ch[j]);
    for (int i = 0; i < 2; ++i) {
      nb.A2h2 += inner_product(sp, AAj[i], AAj[i], eq);
      nb.ACh2 += inner_product(sp, ACj[i], ACj[i], eq);
    }
  }
  return nb;
}

double tail_mass_fraction(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  const Discretization& d = h.disc();
  const int nv = d.n_v;
  double tail = 0.0, total = 0.0;
  for (int m = 0; m < d.modes(); ++m) {
    const double c = ip_block(h, h, eq, m);
    total += c;
    if (m / nv == nv - 1 || m % nv == nv - 1) tail += c;
  }
  return total > 0.0 ? tail / total : 0.0;
}

SpectralState make_initial_data(const Space& sp, const InitialDataSpec& spec,
                                const Equilibrium& eq) {
  const Discretization& d = sp.disc();
  if (spec.spatial_band < 0 || spec.spatial_band > d.n_x / 2)
    throw ConfigError("init.spatial_band outside grid resolution");
  if (spec.hermite_band < 0 || spec.hermite_band > d.n_v - 1)
    throw ConfigError("init.hermite_band outside Hermite resolution");
  if (spec.target_norm < 0.0) throw ConfigError("init.target_norm must be >= 0");

  SpectralState h(d);
  if (spec.target_norm == 0.0) return h;

  switch (spec.kind) {
    case InitKind::random_band: {
      const int np = d.npts();
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 10) throw Error("make_initial_data: degenerate draw after 10 retries");
        Rng rng(spec.seed + static_cast<std::uint64_t>(attempt));
        h.set_zero();
        for (int m1 = 0; m1 <= spec.hermite_band; ++m1)
          for (int m2 = 0; m2 <= spec.hermite_band; ++m2) {
            double* p = h.mode(m1, m2);
            for (int g = 0; g < np; ++g) p[g] = rng.normal();
            sp.grid().lowpass(p, spec.spatial_band);
          }
        project_mean_free(sp, h, eq);
        const double nrm = norm_h(sp, h, eq);
        if (nrm > 1e-14) {
          h *= spec.target_norm / nrm;
          break;
        }
      }
      break;
    }
    case InitKind::single_mode: {
      if (spec.n1 >= d.n_v || spec.n2 >= d.n_v)
        throw ConfigError("init mode indices outside Hermite resolution");
      double* p = h.mode(spec.n1, spec.n2);
      const int n = d.n_x;
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
          p[i1 * n + i2] = std::cos(2.0 * M_PI * (spec.kx * (static_cast<double>(i1) / n) +
                                                  spec.ky * (static_cast<double>(i2) / n)));
      project_mean_free(sp, h, eq);
      const double nrm = norm_h(sp, h, eq);
      if (nrm <= 1e-14) throw Error("make_initial_data: degenerate single mode");
      h *= spec.target_norm / nrm;
      break;
    }
    case InitKind::grid_file: {
      h = read_state(spec.file);
      if (!(h.disc() == d)) throw ConfigError("state file resolution does not match run");
      project_mean_free(sp, h, eq);
      const double nrm = norm_h(sp, h, eq);
      if (nrm <= 1e-14) throw Error("make_initial_data: file state vanishes after projection");
      h *= spec.target_norm / nrm;
      break;
    }
  }
  return h;
}

namespace ref {

StatePair apply_A(const SpectralState& h) {
  const Discretization& d = h.disc();
  StatePair out{SpectralState(d), SpectralState(d)};
  const int nv = d.n_v, np = d.npts();
  for (int m1 = 0; m1 < nv; ++m1)
    for (int m2 = 0; m2 < nv; ++m2) {
      if (m1 + 1 < nv) {
        const double f = std::sqrt(m1 + 1.0);
        const double* src = h.mode(m1 + 1, m2);
        double* dst = out[0].mode(m1, m2);
        for (int g = 0; g < np; ++g) dst[g] = f * src[g];
      }
      if (m2 + 1 < nv) {
        const double f = std::sqrt(m2 + 1.0);
        const double* src = h.mode(m1, m2 + 1);
        double* dst = out[1].mode(m1, m2);
        for (int g = 0; g < np; ++g) dst[g] = f * src[g];
      }
    }
  return out;
}

StatePair apply_Astar(const SpectralState& h) {
  const Discretization& d = h.disc();
  StatePair out{SpectralState(d), SpectralState(d)};
  const int nv = d.n_v, np = d.npts();
  for (int m1 = 0; m1 < nv; ++m1)
    for (int m2 = 0; m2 < nv; ++m2) {
      if (m1 > 0) {
        const double f = std::sqrt(static_cast<double>(m1));
        const double* src = h.mode(m1 - 1, m2);
        double* dst = out[0].mode(m1, m2);
        for (int g = 0; g < np; ++g) dst[g] = f * src[g];
      }
      if (m2 > 0) {
        const double f = std::sqrt(static_cast<double>(m2));
        const double* src = h.mode(m1, m2 - 1);
        double* dst = out[1].mode(m1, m2);
        for (int g = 0; g < np; ++g) dst[g] = f * src[g];
      }
    }
  return out;
}

StatePair apply_C(const Space& sp, const SpectralState& h) {
  const Discretization& d = h.disc();
  StatePair out{SpectralState(d), SpectralState(d)};
  for (int m = 0; m < d.modes(); ++m)
    sp.grid().derivative(h.mode(m), out[0].mode(m), out[1].mode(m));
  return out;
}

SpectralState apply_B(const Space& sp, const SpectralState& h, const Equilibrium& eq) {
  const Discretization& d = h.disc();
  StatePair dx = ref::apply_C(sp, h);
  StatePair Adx0 = ref::apply_A(dx[0]);
  StatePair Asdx0 = ref::apply_Astar(dx[0]);
  StatePair Adx1 = ref::apply_A(dx[1]);
  StatePair Asdx1 = ref::apply_Astar(dx[1]);
  SpectralState out(d);
  out += Adx0[0];
  out += Asdx0[0];
  out += Adx1[1];
  out += Asdx1[1];
  StatePair Ah = ref::apply_A(h);
  const int np = d.npts();
  for (int i = 0; i < 2; ++i) {
    const double* w = eq.grad_phi[i].data();
    for (int m = 0; m < d.modes(); ++m) {
      std::vector<double> prod(static_cast<size_t>(np));
      const double* src = Ah[i].mode(m);
      for (int g = 0; g < np; ++g) prod[static_cast<size_t>(g)] = w[g] * src[g];
      if (d.dealias) sp.grid().dealias(prod.data());
      double* dst = out.mode(m);
      for (int g = 0; g < np; ++g) dst[g] -= prod[static_cast<size_t>(g)];
    }
  }
  return out;
}

SpectralState apply_FP(const SpectralState& h) {
  StatePair Ah = ref::apply_A(h);
  StatePair As0 = ref::apply_Astar(Ah[0]);
  StatePair As1 = ref::apply_Astar(Ah[1]);
  SpectralState out(h.disc());
  out += As0[0];
  out += As1[1];
  return out;
}

double inner_product(const Space& sp, const SpectralState& a, const SpectralState& b,
                     const Equilibrium& eq) {
  const Discretization& d = a.disc();
  const double* w = eq.rho.data();
  const int np = d.npts();
  double s = 0.0;
  for (int m = 0; m < d.modes(); ++m) {
    const double* pa = a.mode(m);
    const double* pb = b.mode(m);
    for (int g = 0; g < np; ++g) s += pa[g] * pb[g] * w[g];
  }
  return s / np;
}

}  // namespace ref

}  // namespace vpfp
