#pragma once

// Seeded random test fields: smooth superpositions of Gaussians with random
// centers, widths and phases, kept well inside the box so boundary values
// are negligible. Used by the verification suite and the property tests.

#include <random>

#include "nls/field.hpp"

namespace nls {

inline Field random_bump(CartesianGridPtr g, std::mt19937_64& rng, int n_modes = 3) {
  const int d = g->dim();
  const double L = g->box_half_length();
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> center(-L / 3.0, L / 3.0);
  std::uniform_real_distribution<double> width(0.8, 2.2);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);

  struct Mode {
    double a, w, th;
    std::array<double, 3> c;
  };
  std::vector<Mode> modes(n_modes);
  for (auto& m : modes) {
    m.a = amp(rng);
    m.w = width(rng);
    m.th = phase(rng);
    m.c = {0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax) m.c[ax] = center(rng);
  }

  return make_cartesian(
      g,
      [&](const std::array<double, 3>& x) {
        Complex v(0.0, 0.0);
        for (const auto& m : modes) {
          double r2 = 0.0;
          for (int ax = 0; ax < d; ++ax) {
            double dx = x[ax] - m.c[ax];
            r2 += dx * dx;
          }
          v += m.a * std::polar(1.0, m.th) * std::exp(-r2 / (2.0 * m.w * m.w));
        }
        return v;
      },
      "random_bump");
}

inline Field random_radial_bump(RadialGridPtr g, std::mt19937_64& rng, int n_modes = 3) {
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> width(0.8, 2.2);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
  struct Mode {
    double a, w, th;
  };
  std::vector<Mode> modes(n_modes);
  for (auto& m : modes) m = {amp(rng), width(rng), phase(rng)};
  return make_radial(
      g,
      [&](double r) {
        Complex v(0.0, 0.0);
        for (const auto& m : modes)
          v += m.a * std::polar(1.0, m.th) * std::exp(-r * r / (2.0 * m.w * m.w));
        return v;
      },
      "random_radial_bump");
}

}  // namespace nls
