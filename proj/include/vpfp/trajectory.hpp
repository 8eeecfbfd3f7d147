#pragma once

#include <vector>

#include "vpfp/hypo_params.hpp"
#include "vpfp/moments.hpp"

namespace vpfp {

// Time series recorded along one run. Functional samples and conserved
// quantities are always present; states and macroscopic fields only when the
// run was asked to retain them.
struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralState> states;
  std::vector<MacroFields> fields;
  std::vector<FunctionalSample> samples;
  std::vector<double> conserved;  // <1,h> per sample
};

// State series with linear-in-time interpolation; source for frozen-field runs.
struct StateSeries {
  std::vector<double> times;
  std::vector<SpectralState> states;

  SpectralState at(double t) const;

  static StateSeries from_trajectory(const Trajectory& traj);
};

}  // namespace vpfp
