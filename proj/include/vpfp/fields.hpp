#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace vpfp {

// Real scalar field on a uniform n x n periodic grid of [0,1)^2.
// Row-major storage: index(i1,i2) = i1*n + i2, x1 = i1/n, x2 = i2/n.
struct ScalarField {
  int n = 0;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(int n_, double fill = 0.0)
      : n(n_), v(static_cast<size_t>(n_) * n_, fill) {}

  double& operator()(int i1, int i2) { return v[static_cast<size_t>(i1) * n + i2]; }
  double operator()(int i1, int i2) const { return v[static_cast<size_t>(i1) * n + i2]; }
  size_t size() const { return v.size(); }
  double* data() { return v.data(); }
  const double* data() const { return v.data(); }
};

struct VectorField {
  std::array<ScalarField, 2> comp;

  VectorField() = default;
  explicit VectorField(int n) : comp{ScalarField(n), ScalarField(n)} {}
  ScalarField& operator[](int i) { return comp[i]; }
  const ScalarField& operator[](int i) const { return comp[i]; }
  int n() const { return comp[0].n; }
};

struct SymTensorField {
  ScalarField xx, xy, yy;

  SymTensorField() = default;
  explicit SymTensorField(int n) : xx(n), xy(n), yy(n) {}
  int n() const { return xx.n; }
};

inline double grid_mean(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  return s / static_cast<double>(f.size());
}

// L^2([0,1)^2) norm by trapezoidal quadrature (= mean of squares on a periodic grid)
inline double grid_l2(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.v) s += x * x;
  return std::sqrt(s / static_cast<double>(f.size()));
}

inline double grid_linf(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

// L^p norm; p = inf gives the max norm
inline double grid_lp(const ScalarField& f, double p) {
  if (std::isinf(p)) return grid_linf(f);
  double s = 0.0;
  for (double x : f.v) s += std::pow(std::abs(x), p);
  return std::pow(s / static_cast<double>(f.size()), 1.0 / p);
}

inline bool grid_finite(const ScalarField& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void field_axpy(double a, const ScalarField& x, ScalarField& y) {
  for (size_t i = 0; i < y.size(); ++i) y.v[i] += a * x.v[i];
}

inline double grid_l2_vec(const VectorField& f) {
  double a = grid_l2(f[0]), b = grid_l2(f[1]);
  return std::sqrt(a * a + b * b);
}

}  // namespace vpfp
