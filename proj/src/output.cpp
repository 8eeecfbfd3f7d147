#include "vpfp/output.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "vpfp/asymptotics.hpp"

namespace vpfp {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string version_string() { return "vpfp 1.0.0"; }

void write_samples_csv(const std::string& path, const std::vector<FunctionalSample>& samples) {
  std::ofstream out = open_out(path);
  out << "t,w,norm_h2,norm_Ah2,norm_Ch2,cross_AC,norm_A2h2,norm_ACh2,norm_AsAh2,"
         "field_energy,triple_norm,E_func,D_diss\n";
  for (const FunctionalSample& s : samples) {
    out << fmt(s.t) << ',' << fmt(s.w) << ',' << fmt(s.h2) << ',' << fmt(s.Ah2) << ','
        << fmt(s.Ch2) << ',' << fmt(s.cross_AC) << ',' << fmt(s.A2h2) << ',' << fmt(s.ACh2)
        << ',' << fmt(s.AsAh2) << ',' << fmt(s.field_energy) << ',' << fmt(s.triple_norm_sq)
        << ',' << fmt(s.e_functional) << ',' << fmt(s.d_dissipation) << '\n';
  }
  if (!out) throw Error("write failed for " + path);
}

void write_macro_csv(const std::string& path, const MacroFields& mf) {
  std::ofstream out = open_out(path);
  out << "x1,x2,n,j1,j2,S11,S12,S22,E1,E2\n";
  const int n = mf.n.n;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const double x1 = static_cast<double>(i1) / n;
      const double x2 = static_cast<double>(i2) / n;
      out << fmt(x1) << ',' << fmt(x2) << ',' << fmt(mf.n(i1, i2)) << ',' << fmt(mf.j[0](i1, i2))
          << ',' << fmt(mf.j[1](i1, i2)) << ',' << fmt(mf.S.xx(i1, i2)) << ','
          << fmt(mf.S.xy(i1, i2)) << ',' << fmt(mf.S.yy(i1, i2)) << ','
          << fmt(mf.E.n() ? mf.E[0](i1, i2) : 0.0) << ','
          << fmt(mf.E.n() ? mf.E[1](i1, i2) : 0.0) << '\n';
    }
  if (!out) throw Error("write failed for " + path);
}

void write_summary_json(const std::string& path, const RunSummary& s) {
  nlohmann::json j;
  j["manifest"] = {{"config_hash", s.manifest.config_hash},
                   {"seed", s.manifest.seed},
                   {"version", s.manifest.version},
                   {"outputs", s.manifest.outputs},
                   {"wall_time_s", s.manifest.wall_time_s}};
  j["tau"] = s.tau;
  j["delta"] = s.delta;
  j["status"] = s.status;
  j["final"] = {{"norm_h", s.final_norm_h}, {"field_energy", s.final_field_energy}};
  j["conservation"] = {{"mass_drift_max", s.mass_drift_max}};
  j["tail_mass_frac_max"] = s.tail_mass_frac_max;
  j["kappa_min"] = s.kappa_min;
  if (s.rate_valid)
    j["rate"] = {{"value", s.rate.rate},
                 {"r_squared", s.rate.r_squared},
                 {"window", {s.rate.t_min, s.rate.t_max}},
                 {"n_points", s.rate.n_points}};
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells) {
  std::ofstream out = open_out(path);
  out << "tau,delta,seed,status,final_norm_h,fitted_rate,r_squared,mass_drift_max\n";
  for (const SweepCell& c : cells) {
    out << fmt(c.tau) << ',' << fmt(c.delta) << ',' << c.seed << ',' << c.status << ','
        << fmt(c.final_norm_h) << ',' << fmt(c.fitted_rate) << ',' << fmt(c.r_squared) << ','
        << fmt(c.mass_drift_max) << '\n';
  }
  if (!out) throw Error("write failed for " + path);
}

void write_regime_json(const std::string& path, const RegimeReport& rep) {
  nlohmann::json j;
  j["regime"] = rep.regime;
  j["t_ref_rule"] = rep.rule;
  j["horizon"] = rep.horizon;
  j["tau"] = rep.taus;
  j["errors"] = rep.errors;
  if (!rep.err_ntilde.empty()) {
    j["err_ntilde"] = rep.err_ntilde;
    j["err_density"] = rep.err_density;
    j["order_ntilde"] = rep.order_ntilde;
    j["r2_ntilde"] = rep.r2_ntilde;
  }
  if (!rep.rates.empty()) j["rates"] = rep.rates;
  j["order"] = rep.order;
  j["r_squared"] = rep.r_squared;
  j["monotone"] = rep.monotone;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_plot_script(const std::string& path, const std::string& csv_name) {
  std::ofstream out = open_out(path);
  out << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set xlabel 't'\n"
      << "set ylabel 'functionals'\n"
      << "plot '" << csv_name << "' using 1:3 with lines title 'norm_h2', \\\n"
      << "     '" << csv_name << "' using 1:12 with lines title 'E_func', \\\n"
      << "     '" << csv_name << "' using 1:13 with lines title 'D_diss'\n";
}

}  // namespace vpfp
