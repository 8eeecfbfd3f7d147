#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vpfp/errors.hpp"

namespace vpfp {

// Truncation parameters of the Fourier-Hermite representation.
struct Discretization {
  int n_x = 32;         // spatial points per direction, power of two
  int n_v = 8;          // Hermite modes per velocity direction
  bool dealias = true;  // 2/3-rule truncation of products with spatial fields

  void validate() const {
    if (n_x < 8 || (n_x & (n_x - 1)) != 0)
      throw ConfigError("n_x must be a power of two >= 8");
    if (n_v < 4) throw ConfigError("n_v must be >= 4");
  }

  int modes() const { return n_v * n_v; }
  int npts() const { return n_x * n_x; }
  size_t state_size() const { return static_cast<size_t>(modes()) * npts(); }
  int mode_index(int m1, int m2) const { return m1 * n_v + m2; }

  bool operator==(const Discretization&) const = default;
};

// Perturbation h(x,v) = sum_m h_m(x) psi_m(v) with psi_m the Hermite basis
// orthonormal for the standard Gaussian velocity weight. Coefficient fields
// h_m are stored on the collocation grid, contiguously per Hermite index
// m = (m1,m2) in lexicographic order.
class SpectralState {
 public:
  SpectralState() = default;
  explicit SpectralState(const Discretization& d)
      : disc_(d), a_(d.state_size(), 0.0) {}

  const Discretization& disc() const { return disc_; }
  size_t size() const { return a_.size(); }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  double* mode(int m) { return a_.data() + static_cast<size_t>(m) * disc_.npts(); }
  const double* mode(int m) const { return a_.data() + static_cast<size_t>(m) * disc_.npts(); }
  double* mode(int m1, int m2) { return mode(disc_.mode_index(m1, m2)); }
  const double* mode(int m1, int m2) const { return mode(disc_.mode_index(m1, m2)); }

  void set_zero() { a_.assign(a_.size(), 0.0); }

  SpectralState& operator+=(const SpectralState& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  SpectralState& operator-=(const SpectralState& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  SpectralState& operator*=(double c) {
    for (double& x : a_) x *= c;
    return *this;
  }

 private:
  Discretization disc_;
  std::vector<double> a_;
};

inline void state_axpy(double a, const SpectralState& x, SpectralState& y) {
  const double* xs = x.data();
  double* ys = y.data();
  const size_t m = y.size();
  for (size_t i = 0; i < m; ++i) ys[i] += a * xs[i];
}

inline double state_max_abs(const SpectralState& s) {
  double m = 0.0;
  const double* a = s.data();
  for (size_t i = 0; i < s.size(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

inline bool state_finite(const SpectralState& s) {
  const double* a = s.data();
  for (size_t i = 0; i < s.size(); ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

// Plain-text state file: header "n_x n_v", then one block per Hermite index
// in lexicographic (m1,m2) order, row-major spatial values.
void write_state(const std::string& path, const SpectralState& s);
SpectralState read_state(const std::string& path);

}  // namespace vpfp
