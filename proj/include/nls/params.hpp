#pragma once

// Physical parameters of i u_t + Delta u = |u|^(4/d) u - |u|^(p-1) u.
//
// Admissible range: d in {1,2,3}, omega > 0, and
//   d in {1,2}:  p > 1 + 4/d,
//   d = 3:       1 + 4/d < p <= 1 + 4/(d-2), energy-critical iff p = 5.

#include <sstream>

#include "nls/common.hpp"

namespace nls {

enum class Regime { subcritical, energy_critical };

struct Params {
  int d = 1;
  double p = 0.0;
  double omega = 0.0;
  Regime regime = Regime::subcritical;

  static Params make(int d, double p, double omega) {
    if (d < 1 || d > 3) throw InvalidParameter("dimension d must be 1, 2 or 3");
    if (!(omega > 0.0)) throw InvalidParameter("omega must be positive");
    double p_low = 1.0 + 4.0 / d;
    if (!(p > p_low)) {
      std::ostringstream os;
      os << "p = " << p << " not admissible: need p > 1 + 4/d = " << p_low;
      throw InvalidParameter(os.str());
    }
    Params pr;
    pr.d = d;
    pr.p = p;
    pr.omega = omega;
    if (d == 3) {
      double p_crit = 1.0 + 4.0 / (d - 2);
      if (p > p_crit)
        throw InvalidParameter("p exceeds the energy-critical exponent 1 + 4/(d-2)");
      pr.regime = (p == p_crit) ? Regime::energy_critical : Regime::subcritical;
    }
    return pr;
  }

  bool energy_critical() const { return regime == Regime::energy_critical; }

  // exponent of the defocusing mass-critical term, 2(d+2)/d
  double mass_critical_power() const { return 2.0 * (d + 2) / d; }

  // d(p-1)/2, the lambda-exponent of the L^{p+1} term under T_lambda
  double scaling_exponent() const { return 0.5 * d * (p - 1.0); }
};

inline double surface_area_unit_sphere(int d) {
  switch (d) {
    case 1: return 2.0;            // two half-lines
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    default: throw InvalidParameter("unsupported dimension");
  }
}

}  // namespace nls
