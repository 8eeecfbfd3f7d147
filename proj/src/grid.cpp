#include "vpfp/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "vpfp/errors.hpp"

namespace vpfp {

namespace {

// FFTW planning is not thread-safe; execution via the new-array interface is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

thread_local std::vector<Cplx> tl_spec_a;
thread_local std::vector<Cplx> tl_spec_b;

}  // namespace

SpectralGrid::SpectralGrid(int n) : n_(n) {
  if (n < 4) throw ConfigError("grid size must be at least 4");
  const int nh = n / 2 + 1;
  d1_.resize(static_cast<size_t>(n) * nh);
  d2_.resize(static_cast<size_t>(n) * nh);
  lap_.resize(static_cast<size_t>(n) * nh);
  keep_.resize(static_cast<size_t>(n) * nh);
  const int band = n / 3;
  for (int k1 = 0; k1 < n; ++k1) {
    const int s1 = (k1 <= n / 2) ? k1 : k1 - n;           // signed, Nyquist positive
    const int d1s = (k1 < n / 2) ? k1 : ((k1 == n / 2) ? 0 : k1 - n);
    for (int k2 = 0; k2 < nh; ++k2) {
      const size_t ik = static_cast<size_t>(k1) * nh + k2;
      const int d2s = (k2 == n / 2) ? 0 : k2;
      d1_[ik] = kTwoPi * d1s;
      d2_[ik] = kTwoPi * d2s;
      lap_[ik] = -kTwoPi * kTwoPi * (static_cast<double>(s1) * s1 + static_cast<double>(k2) * k2);
      keep_[ik] = (std::abs(s1) <= band && k2 <= band) ? 1 : 0;
    }
  }

  std::lock_guard<std::mutex> lock(plan_mutex());
  double* rbuf = fftw_alloc_real(static_cast<size_t>(n) * n);
  fftw_complex* cbuf = fftw_alloc_complex(static_cast<size_t>(n) * nh);
  plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, rbuf, cbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_c2r_2d(n, n, cbuf, rbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(rbuf);
  fftw_free(cbuf);
  if (!plan_fwd_ || !plan_bwd_) throw Error("FFTW plan creation failed");
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralGrid::forward(const double* in, Cplx* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void SpectralGrid::backward(const Cplx* in, double* out) const {
  // multi-d c2r clobbers its input, so run on a thread-local copy
  tl_spec_a.assign(in, in + nk());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(tl_spec_a.data()), out);
  const double scale = 1.0 / npts();
  const int np = npts();
  for (int i = 0; i < np; ++i) out[i] *= scale;
}

void SpectralGrid::backward_destroy(Cplx* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(in), out);
  const double scale = 1.0 / npts();
  const int np = npts();
  for (int i = 0; i < np; ++i) out[i] *= scale;
}

void SpectralGrid::mask_spectrum(Cplx* spec) const {
  const int m = nk();
  for (int i = 0; i < m; ++i)
    if (!keep_[static_cast<size_t>(i)]) spec[i] = Cplx(0.0, 0.0);
}

void SpectralGrid::derivative(const double* in, double* d0, double* d1) const {
  tl_spec_b.resize(static_cast<size_t>(nk()));
  forward(in, tl_spec_b.data());
  std::vector<Cplx>& spec = tl_spec_b;
  tl_spec_a.resize(static_cast<size_t>(nk()));
  const int m = nk();
  if (d0) {
    for (int i = 0; i < m; ++i)
      tl_spec_a[static_cast<size_t>(i)] = Cplx(0.0, d1_[static_cast<size_t>(i)]) * spec[static_cast<size_t>(i)];
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                         reinterpret_cast<fftw_complex*>(tl_spec_a.data()), d0);
    const double scale = 1.0 / npts();
    for (int i = 0; i < npts(); ++i) d0[i] *= scale;
  }
  if (d1) {
    for (int i = 0; i < m; ++i)
      tl_spec_a[static_cast<size_t>(i)] = Cplx(0.0, d2_[static_cast<size_t>(i)]) * spec[static_cast<size_t>(i)];
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                         reinterpret_cast<fftw_complex*>(tl_spec_a.data()), d1);
    const double scale = 1.0 / npts();
    for (int i = 0; i < npts(); ++i) d1[i] *= scale;
  }
}

ScalarField SpectralGrid::derivative(const ScalarField& f, int axis) const {
  ScalarField out(n_);
  derivative(f.data(), axis == 0 ? out.data() : nullptr, axis == 1 ? out.data() : nullptr);
  return out;
}

VectorField SpectralGrid::gradient(const ScalarField& f) const {
  VectorField out(n_);
  derivative(f.data(), out[0].data(), out[1].data());
  return out;
}

ScalarField SpectralGrid::laplacian(const ScalarField& f) const {
  tl_spec_b.resize(static_cast<size_t>(nk()));
  forward(f.data(), tl_spec_b.data());
  const int m = nk();
  for (int i = 0; i < m; ++i) tl_spec_b[static_cast<size_t>(i)] *= lap_[static_cast<size_t>(i)];
  ScalarField out(n_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(tl_spec_b.data()), out.data());
  const double scale = 1.0 / npts();
  for (double& x : out.v) x *= scale;
  return out;
}

ScalarField SpectralGrid::poisson(const ScalarField& f, double delta) const {
  tl_spec_b.resize(static_cast<size_t>(nk()));
  forward(f.data(), tl_spec_b.data());
  const int m = nk();
  tl_spec_b[0] = Cplx(0.0, 0.0);
  for (int i = 1; i < m; ++i)
    tl_spec_b[static_cast<size_t>(i)] /= (-delta * delta * lap_[static_cast<size_t>(i)]);
  ScalarField out(n_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(tl_spec_b.data()), out.data());
  const double scale = 1.0 / npts();
  for (double& x : out.v) x *= scale;
  return out;
}

void SpectralGrid::dealias(double* f) const {
  tl_spec_b.resize(static_cast<size_t>(nk()));
  forward(f, tl_spec_b.data());
  mask_spectrum(tl_spec_b.data());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(tl_spec_b.data()), f);
  const double scale = 1.0 / npts();
  for (int i = 0; i < npts(); ++i) f[i] *= scale;
}

void SpectralGrid::lowpass(double* f, int band) const {
  tl_spec_b.resize(static_cast<size_t>(nk()));
  forward(f, tl_spec_b.data());
  const int nh = n_ / 2 + 1;
  for (int k1 = 0; k1 < n_; ++k1) {
    const int s1 = (k1 <= n_ / 2) ? k1 : k1 - n_;
    for (int k2 = 0; k2 < nh; ++k2) {
      if (std::abs(s1) > band || k2 > band)
        tl_spec_b[static_cast<size_t>(k1) * nh + k2] = Cplx(0.0, 0.0);
    }
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(tl_spec_b.data()), f);
  const double scale = 1.0 / npts();
  for (int i = 0; i < npts(); ++i) f[i] *= scale;
}

}  // namespace vpfp
