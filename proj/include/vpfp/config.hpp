#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vpfp/asymptotics.hpp"
#include "vpfp/equilibrium.hpp"
#include "vpfp/solver.hpp"

namespace vpfp {

// Flat key-value configuration file with dotted sections:
//   # comment
//   tau = 0.5
//   rho_star.kind = cos_x
//   sweep.tau_list = 0.1, 1, 10
// Keys are tracked on access; anything never consumed is rejected.
class ConfigMap {
 public:
  static ConfigMap from_file(const std::string& path);
  static ConfigMap from_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  void reject_unknown() const;          // throws ConfigError naming stray keys
  const std::string& raw_text() const { return raw_; }

 private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> seen_;
  std::string raw_;
};

// Background density profile selected by rho_star.* keys.
ScalarField build_rho_star(const ConfigMap& cfg, int n_x);
// Plain-text grid file: first line "N N", then row-major values.
ScalarField read_grid_file(const std::string& path);
void write_grid_file(const std::string& path, const ScalarField& f);

// Fully validated single-run setup assembled from a config file.
struct RunSetup {
  Discretization disc;
  ScalarField rho_star;
  PBSolverConfig pb;
  SolverConfig solver;
  InitialDataSpec init;
  std::vector<double> p_list{2.0, 4.0, std::numeric_limits<double>::infinity()};
  // sweep axes (defaults: the single run values)
  std::vector<double> sweep_tau, sweep_delta;
  std::vector<std::uint64_t> sweep_seeds;
  // asymptotics
  RegimeStudyConfig regime;
  bool regime_configured = false;
  // output
  std::string out_dir = "out";
  std::string prefix = "run";
  bool plot_script = false;
  bool save_states = false;
  bool macro_snapshot = false;
  std::string frozen_source_dir;
  std::string config_hash;

  std::string echo() const;  // effective settings, one per line
};

RunSetup load_run_setup(const ConfigMap& cfg);
RunSetup load_run_setup_file(const std::string& path);

}  // namespace vpfp
