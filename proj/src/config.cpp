#include "vpfp/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vpfp {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigMap ConfigMap::from_string(const std::string& text) {
  ConfigMap c;
  c.raw_ = text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (c.kv_.count(key)) throw ConfigError("duplicate config key '" + key + "'");
    c.kv_[key] = val;
  }
  return c;
}

ConfigMap ConfigMap::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

bool ConfigMap::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  seen_.insert(key);
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string ConfigMap::require_string(const std::string& key) const {
  seen_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing required config key '" + key + "'");
  return it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  seen_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config key '" + key + "' is not a number: " + it->second);
  }
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, static_cast<double>(fallback));
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9) throw ConfigError("config key '" + key + "' must be an integer");
  return i;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  seen_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "' is not a boolean: " + v);
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
  seen_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  std::string item;
  std::istringstream ss(it->second);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw ConfigError("config key '" + key + "' has a non-numeric entry: " + item);
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
  return out;
}

void ConfigMap::reject_unknown() const {
  std::string stray;
  for (const auto& [k, v] : kv_)
    if (!seen_.count(k)) stray += (stray.empty() ? "" : ", ") + k;
  if (!stray.empty()) throw ConfigError("unknown config keys: " + stray);
}

ScalarField read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file " + path);
  int n1 = 0, n2 = 0;
  if (!(in >> n1 >> n2) || n1 != n2 || n1 < 4)
    throw ConfigError("bad grid file header in " + path);
  ScalarField f(n1);
  for (size_t i = 0; i < f.size(); ++i)
    if (!(in >> f.v[i])) throw ConfigError("truncated grid file " + path);
  return f;
}

void write_grid_file(const std::string& path, const ScalarField& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << f.n << " " << f.n << "\n";
  char buf[32];
  for (int i1 = 0; i1 < f.n; ++i1)
    for (int i2 = 0; i2 < f.n; ++i2) {
      std::snprintf(buf, sizeof(buf), "%.17g", f(i1, i2));
      out << buf << (i2 + 1 < f.n ? " " : "\n");
    }
}

ScalarField build_rho_star(const ConfigMap& cfg, int n_x) {
  const std::string kind = cfg.get_string("rho_star.kind", "uniform");
  const double eps = cfg.get_double("rho_star.eps", 0.0);
  const int kx = cfg.get_int("rho_star.kx", 1);
  const int ky = cfg.get_int("rho_star.ky", 1);
  ScalarField f(n_x, 1.0);
  if (kind == "uniform") {
    if (eps != 0.0) throw ConfigError("rho_star.eps has no effect for kind uniform");
  } else if (kind == "cos_x") {
    for (int i1 = 0; i1 < n_x; ++i1)
      for (int i2 = 0; i2 < n_x; ++i2)
        f(i1, i2) = 1.0 + eps * std::cos(2.0 * M_PI * kx * i1 / static_cast<double>(n_x));
  } else if (kind == "cos_xy") {
    for (int i1 = 0; i1 < n_x; ++i1)
      for (int i2 = 0; i2 < n_x; ++i2)
        f(i1, i2) = 1.0 + eps * std::cos(2.0 * M_PI * kx * i1 / static_cast<double>(n_x)) *
                              std::cos(2.0 * M_PI * ky * i2 / static_cast<double>(n_x));
  } else if (kind == "file") {
    f = read_grid_file(cfg.require_string("rho_star.file"));
    if (f.n != n_x) throw ConfigError("rho_star.file resolution does not match n_x");
  } else {
    throw ConfigError("rho_star.kind must be uniform, cos_x, cos_xy or file");
  }
  (void)cfg.get_string("rho_star.file", "");
  return f;
}

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

RunSetup load_run_setup(const ConfigMap& cfg) {
  RunSetup r;
  r.disc.n_x = cfg.get_int("n_x", 32);
  r.disc.n_v = cfg.get_int("n_v", 16);
  r.disc.dealias = cfg.get_bool("dealias", true);
  r.disc.validate();

  r.rho_star = build_rho_star(cfg, r.disc.n_x);

  r.pb.tol = cfg.get_double("pb.tol", 1e-10);
  r.pb.max_iter = cfg.get_int("pb.max_iter", 50);
  r.pb.damping = cfg.get_int("pb.damping", 20);

  r.solver.tau = cfg.get_double("tau", 1.0);
  if (r.solver.tau <= 0.0) throw ConfigError("tau must be positive");
  r.solver.delta = cfg.get_double("delta", 1.0);
  if (r.solver.delta <= 0.0) throw ConfigError("delta must be positive");
  r.solver.dt = cfg.get_double("dt", 0.0);
  r.solver.cfl = cfg.get_double("cfl", 0.4);
  r.solver.t_end = cfg.get_double("t_end", 1.0);
  r.solver.record_every = cfg.get_int("record_every", 10);
  const std::string mode = cfg.get_string("mode", "nonlinear");
  if (mode == "nonlinear")
    r.solver.mode = RunMode::nonlinear;
  else if (mode == "linear_vfp")
    r.solver.mode = RunMode::linear_vfp;
  else if (mode == "frozen")
    r.solver.mode = RunMode::frozen;
  else
    throw ConfigError("mode must be nonlinear, linear_vfp or frozen");

  const std::string regime_str = cfg.get_string("regime", r.solver.tau <= 1.0 ? "diffusive" : "collisional");
  Regime regime;
  if (regime_str == "diffusive")
    regime = Regime::diffusive;
  else if (regime_str == "collisional")
    regime = Regime::collisional;
  else
    throw ConfigError("regime must be diffusive or collisional");

  const double epsilon = cfg.get_double("epsilon", 0.05);
  const std::string beta = cfg.get_string("beta", regime == Regime::diffusive ? "diffusive" : "collisional");
  HypoParams hp;
  hp.regime = regime;
  if (beta == "diffusive")
    hp.beta = diffusive_beta();
  else if (beta == "collisional")
    hp.beta = collisional_beta();
  else {
    std::istringstream ss(beta);
    std::string item;
    std::vector<double> vals;
    while (std::getline(ss, item, ','))
      try {
        vals.push_back(std::stod(trim(item)));
      } catch (...) {
        throw ConfigError("beta must be 'diffusive', 'collisional' or three comma-separated numbers");
      }
    if (vals.size() != 3)
      throw ConfigError("beta must be 'diffusive', 'collisional' or three comma-separated numbers");
    hp.beta = {vals[0], vals[1], vals[2]};
  }
  hp.gamma = select_gamma(hp.beta, epsilon);
  std::string why;
  if (!hp.beta_admissible(&why))
    std::fprintf(stderr, "warning: %s; proceeding anyway\n", why.c_str());
  r.solver.hypo = hp;

  r.init.seed = static_cast<std::uint64_t>(cfg.get_double("seed", 1));
  r.init.target_norm = cfg.get_double("init.target_norm", 1.0);
  r.init.spatial_band = cfg.get_int("init.spatial_band", 3);
  r.init.hermite_band = cfg.get_int("init.hermite_band", 3);
  const std::string ik = cfg.get_string("init.kind", "random_band");
  if (ik == "random_band")
    r.init.kind = InitKind::random_band;
  else if (ik == "single_mode")
    r.init.kind = InitKind::single_mode;
  else if (ik == "grid_file")
    r.init.kind = InitKind::grid_file;
  else
    throw ConfigError("init.kind must be random_band, single_mode or grid_file");
  r.init.kx = cfg.get_int("init.kx", 1);
  r.init.ky = cfg.get_int("init.ky", 0);
  r.init.n1 = cfg.get_int("init.n1", 0);
  r.init.n2 = cfg.get_int("init.n2", 0);
  r.init.file = cfg.get_string("init.file", "");
  if (r.init.kind == InitKind::grid_file && r.init.file.empty())
    throw ConfigError("init.kind = grid_file requires init.file");

  r.sweep_tau = cfg.get_double_list("sweep.tau_list", {r.solver.tau});
  r.sweep_delta = cfg.get_double_list("sweep.delta_list", {r.solver.delta});
  std::vector<double> seeds =
      cfg.get_double_list("sweep.seed_list", {static_cast<double>(r.init.seed)});
  for (double s : seeds) r.sweep_seeds.push_back(static_cast<std::uint64_t>(s));

  // asymptotics block
  if (cfg.has("asym.regime")) {
    r.regime_configured = true;
    r.regime.regime = cfg.get_int("asym.regime", 2);
    if (r.regime.regime < 1 || r.regime.regime > 5)
      throw ConfigError("asym.regime must be 1..5");
    if (cfg.has("asym.t_ref")) {
      r.regime.rule = TimeRefRule::parse(cfg.get_string("asym.t_ref", ""));
      r.regime.rule_set = true;
    }
    r.regime.tau_list = cfg.get_double_list("asym.tau_list", {0.2, 0.1, 0.05});
    for (double t : r.regime.tau_list)
      if (t <= 0.0) throw ConfigError("asym.tau_list entries must be positive");
    r.regime.horizon = cfg.get_double("asym.horizon", 1.0);
    r.regime.delta = r.solver.delta;
    r.regime.disc = r.disc;
    r.regime.init = r.init;
    r.regime.cfl = r.solver.cfl;
    r.regime.dd_dt = cfg.get_double("asym.dd_dt", 2e-4);
  } else {
    (void)cfg.get_string("asym.t_ref", "");
    (void)cfg.get_double_list("asym.tau_list", {});
    (void)cfg.get_double("asym.horizon", 1.0);
    (void)cfg.get_double("asym.dd_dt", 2e-4);
  }

  r.out_dir = cfg.get_string("output.dir", "out");
  r.prefix = cfg.get_string("output.prefix", "run");
  r.plot_script = cfg.get_bool("output.plot_script", false);
  r.save_states = cfg.get_bool("output.save_states", false);
  r.macro_snapshot = cfg.get_bool("output.macro_snapshot", false);
  r.frozen_source_dir = cfg.get_string("frozen.source", "");
  if (!r.frozen_source_dir.empty() && r.solver.mode != RunMode::frozen)
    throw ConfigError("frozen.source given but mode is not frozen");
  if (r.frozen_source_dir.empty() && r.solver.mode == RunMode::frozen)
    throw ConfigError(
        "frozen mode requires frozen.source (directory written with output.save_states)");

  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.raw_text())));
  r.config_hash = hash;

  cfg.reject_unknown();
  return r;
}

RunSetup load_run_setup_file(const std::string& path) {
  return load_run_setup(ConfigMap::from_file(path));
}

std::string RunSetup::echo() const {
  std::ostringstream ss;
  ss << "n_x = " << disc.n_x << "\n";
  ss << "n_v = " << disc.n_v << "\n";
  ss << "dealias = " << (disc.dealias ? "true" : "false") << "\n";
  ss << "tau = " << solver.tau << "\n";
  ss << "delta = " << solver.delta << "\n";
  ss << "dt = " << (solver.dt > 0 ? std::to_string(solver.dt) : std::string("auto(cfl)")) << "\n";
  ss << "cfl = " << solver.cfl << "\n";
  ss << "t_end = " << solver.t_end << "\n";
  ss << "mode = "
     << (solver.mode == RunMode::nonlinear
             ? "nonlinear"
             : (solver.mode == RunMode::linear_vfp ? "linear_vfp" : "frozen"))
     << "\n";
  ss << "record_every = " << solver.record_every << "\n";
  ss << "seed = " << init.seed << "\n";
  ss << "beta = (" << solver.hypo.beta[0] << ", " << solver.hypo.beta[1] << ", "
     << solver.hypo.beta[2] << ")\n";
  ss << "gamma = (" << solver.hypo.gamma[0] << ", " << solver.hypo.gamma[1] << ", "
     << solver.hypo.gamma[2] << ")\n";
  ss << "output.dir = " << out_dir << "\n";
  ss << "config_hash = " << config_hash << "\n";
  return ss.str();
}

}  // namespace vpfp
