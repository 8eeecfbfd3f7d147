#pragma once

#include <string>
#include <vector>

#include "vpfp/diagnostics.hpp"
#include "vpfp/trajectory.hpp"

namespace vpfp {

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::string> outputs;
  double wall_time_s = 0;  // the one field allowed to differ between reruns
};

// Stable column set:
// t,w,norm_h2,norm_Ah2,norm_Ch2,cross_AC,norm_A2h2,norm_ACh2,norm_AsAh2,
// field_energy,triple_norm,E_func,D_diss
void write_samples_csv(const std::string& path, const std::vector<FunctionalSample>& samples);

// x1,x2,n,j1,j2,S11,S12,S22,E1,E2 for one snapshot
void write_macro_csv(const std::string& path, const MacroFields& mf);

struct RunSummary {
  RunManifest manifest;
  double tau = 0, delta = 0;
  double final_norm_h = 0, final_field_energy = 0;
  double mass_drift_max = 0;
  double tail_mass_frac_max = 0;
  double kappa_min = 0;
  bool rate_valid = false;
  RateFit rate;
  std::string status = "ok";
};

void write_summary_json(const std::string& path, const RunSummary& s);

struct SweepCell {
  double tau = 0, delta = 0;
  std::uint64_t seed = 0;
  std::string status;  // ok | numerical_abort | error
  double final_norm_h = 0;
  double fitted_rate = 0, r_squared = 0;
  double mass_drift_max = 0;
};

// one row per cell, fixed order
void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells);

struct RegimeReport;
void write_regime_json(const std::string& path, const RegimeReport& rep);

// gnuplot companion for a samples CSV
void write_plot_script(const std::string& path, const std::string& csv_name);

std::string version_string();

}  // namespace vpfp
