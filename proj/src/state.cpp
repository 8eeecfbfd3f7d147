#include "vpfp/state.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vpfp {

void write_state(const std::string& path, const SpectralState& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  const Discretization& d = s.disc();
  out << d.n_x << " " << d.n_v << "\n";
  char buf[32];
  for (int m = 0; m < d.modes(); ++m) {
    const double* p = s.mode(m);
    for (int i1 = 0; i1 < d.n_x; ++i1) {
      for (int i2 = 0; i2 < d.n_x; ++i2) {
        std::snprintf(buf, sizeof(buf), "%.17g", p[i1 * d.n_x + i2]);
        out << buf << (i2 + 1 < d.n_x ? " " : "\n");
      }
    }
  }
  if (!out) throw Error("write failed for " + path);
}

SpectralState read_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open state file " + path);
  Discretization d;
  if (!(in >> d.n_x >> d.n_v)) throw Error("bad state file header in " + path);
  d.validate();
  SpectralState s(d);
  double* p = s.data();
  for (size_t i = 0; i < s.size(); ++i) {
    if (!(in >> p[i])) throw Error("truncated state file " + path);
  }
  return s;
}

}  // namespace vpfp
