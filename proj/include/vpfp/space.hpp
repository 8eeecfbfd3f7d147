#pragma once

#include "vpfp/grid.hpp"
#include "vpfp/state.hpp"

namespace vpfp {

// Bundles a discretization with its FFT machinery. One Space may be shared
// by any number of states and runs at the same resolution.
class Space {
 public:
  explicit Space(const Discretization& d) : disc_(d), grid_(d.n_x) { d.validate(); }

  const Discretization& disc() const { return disc_; }
  const SpectralGrid& grid() const { return grid_; }
  int n_x() const { return disc_.n_x; }
  int n_v() const { return disc_.n_v; }

  SpectralState state() const { return SpectralState(disc_); }

 private:
  Discretization disc_;
  SpectralGrid grid_;
};

}  // namespace vpfp
