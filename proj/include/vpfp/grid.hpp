#pragma once

#include <complex>
#include <vector>

#include "vpfp/fields.hpp"

namespace vpfp {

using Cplx = std::complex<double>;

// Fourier collocation grid on [0,1)^2 with cached FFTW plans.
//
// Real-to-complex layout: nk() = n*(n/2+1) coefficients; row index k1 in
// [0,n) carries the signed frequency (k1 <= n/2 ? k1 : k1-n), column index
// k2 in [0,n/2]. Derivative multipliers zero the Nyquist frequency so that
// derivatives of real fields stay real and exactly skew-adjoint.
//
// Plan creation is serialized internally; forward/backward execution is
// thread-safe and may be called concurrently on distinct buffers.
class SpectralGrid {
 public:
  explicit SpectralGrid(int n);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int n() const { return n_; }
  int npts() const { return n_ * n_; }
  int nk() const { return n_ * (n_ / 2 + 1); }

  // unnormalized r2c transform; input preserved
  void forward(const double* in, Cplx* out) const;
  // c2r transform including the 1/n^2 factor; input preserved (copied internally)
  void backward(const Cplx* in, double* out) const;
  // c2r transform that clobbers its input; for caller-owned scratch
  void backward_destroy(Cplx* in, double* out) const;

  // derivative multipliers 2*pi*k_signed per flat spectral index (Nyquist zeroed)
  const double* deriv_mult(int axis) const { return axis == 0 ? d1_.data() : d2_.data(); }
  // -|2 pi k|^2 per flat spectral index
  const double* laplace_mult() const { return lap_.data(); }
  // 2/3-rule mask, 1 = keep
  const unsigned char* keep_mask() const { return keep_.data(); }

  void mask_spectrum(Cplx* spec) const;

  void derivative(const double* in, double* d0, double* d1) const;
  ScalarField derivative(const ScalarField& f, int axis) const;
  VectorField gradient(const ScalarField& f) const;
  ScalarField laplacian(const ScalarField& f) const;

  // mean-zero psi solving  -delta^2 Lap(psi) = f  (the k=0 mode of f is ignored)
  ScalarField poisson(const ScalarField& f, double delta) const;

  // 2/3-rule truncation, round trip through spectral space
  void dealias(double* f) const;
  void dealias(ScalarField& f) const { dealias(f.data()); }
  // zero every mode with max(|k1|,|k2|) > band
  void lowpass(double* f, int band) const;

  // trapezoidal integral over [0,1)^2 (equals the grid mean)
  static double integral(const ScalarField& f) { return grid_mean(f); }

 private:
  int n_;
  std::vector<double> d1_, d2_, lap_;
  std::vector<unsigned char> keep_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

}  // namespace vpfp
