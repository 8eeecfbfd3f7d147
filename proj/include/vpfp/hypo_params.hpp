#pragma once

#include <array>
#include <cmath>
#include <string>

#include "vpfp/errors.hpp"

namespace vpfp {

enum class Regime { diffusive, collisional };

// Exponents and weights of the time-weighted Lyapunov functional
//   |||h|||^2 = ||h||^2 + g1 tau^b1 w ||Ah||^2 + g2 tau^b2 w^3 ||Ch||^2
//             + 2 g3 tau^b3 w^2 <Ah,Ch>,        w = min(1, t/tau),
// its dissipation D and the field-augmented functional E.
struct HypoParams {
  std::array<double, 3> beta{0.0, 2.0, 1.0};
  std::array<double, 3> gamma{0.05, 0.0025, 0.0052556};
  Regime regime = Regime::diffusive;

  // margin of the norm equivalence; positive iff gamma3 < sqrt(gamma1*gamma2)
  double equivalence_margin() const {
    return 1.0 - gamma[2] / std::sqrt(gamma[0] * gamma[1]);
  }

  // admissibility of beta for the declared regime; returns a diagnostic
  // string when violated (callers warn rather than abort: exploration of
  // off-regime exponents is allowed)
  bool beta_admissible(std::string* why = nullptr) const;

  static HypoParams preset(Regime regime, double epsilon);
};

inline std::array<double, 3> diffusive_beta() { return {0.0, 2.0, 1.0}; }
inline std::array<double, 3> collisional_beta() {
  return {-8.0 / 15.0, 2.0 / 5.0, -1.0 / 15.0};
}

// gamma_j = epsilon^{c_j} with (c1,c2,c3) = (1, 2, 7/4); keeps
// gamma3 < sqrt(gamma1*gamma2) for every epsilon in (0,1)
std::array<double, 3> select_gamma(const std::array<double, 3>& beta, double epsilon);

// One evaluation of all functional and dissipation components at time t.
struct FunctionalSample {
  double t = 0, w = 0;
  double h2 = 0, Ah2 = 0, Ch2 = 0, cross_AC = 0;
  double A2h2 = 0, ACh2 = 0, AsAh2 = 0;
  double field_energy = 0;  // delta^2 ||E||_L2^2
  double triple_norm_sq = 0;
  double e_functional = 0;
  double d_dissipation = 0;
};

}  // namespace vpfp
