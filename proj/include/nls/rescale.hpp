#pragma once

// Scaling maps on fields:
//   mass_invariant    (T_lambda u)(x)       = lambda^(d/2)     u(lambda x)
//   energy_invariant  (T~_lambda u)(x)      = lambda^((d-2)/2) u(lambda x)
// realized by order-8 Lagrange interpolation onto the same grid. Off-box
// evaluation points contribute zero (fields of interest vanish well inside
// the boundary). Expanding a field (lambda < 1) whose support would leave
// the box is an error.

#include "nls/field.hpp"

namespace nls {

enum class RescaleMode { mass_invariant, energy_invariant };

namespace detail {

inline constexpr int kInterpOrder = 8;

// Lagrange weights for evaluation at offset t in units of h from node i0,
// stencil nodes i0 .. i0+7
inline void lagrange_weights(double t, double* w) {
  for (int j = 0; j < kInterpOrder; ++j) {
    double num = 1.0, den = 1.0;
    for (int m = 0; m < kInterpOrder; ++m) {
      if (m == j) continue;
      num *= (t - m);
      den *= static_cast<double>(j - m);
    }
    w[j] = num / den;
  }
}

// 1d sample gatherers
struct PeriodicAxis {
  int n;
  int wrap(int i) const {
    int m = i % n;
    return m < 0 ? m + n : m;
  }
};

}  // namespace detail

// Interpolate a cartesian field at an arbitrary point; zero outside the box.
inline Complex interpolate_cartesian(const Field& u, const std::array<double, 3>& y) {
  const CartesianGrid& g = u.cart();
  const int d = g.dim(), n = g.points_per_axis();
  const double L = g.box_half_length(), h = g.spacing();
  for (int a = 0; a < d; ++a)
    if (y[a] < -L || y[a] >= L) return Complex(0.0, 0.0);

  int base[3] = {0, 0, 0};
  double w[3][detail::kInterpOrder];
  detail::PeriodicAxis ax{n};
  for (int a = 0; a < d; ++a) {
    double s = (y[a] + L) / h;
    int i0 = static_cast<int>(std::floor(s)) - (detail::kInterpOrder / 2 - 1);
    detail::lagrange_weights(s - i0, w[a]);
    base[a] = i0;
  }

  Complex acc(0.0, 0.0);
  if (d == 1) {
    for (int j = 0; j < detail::kInterpOrder; ++j)
      acc += w[0][j] * u.values[ax.wrap(base[0] + j)];
  } else if (d == 2) {
    for (int j0 = 0; j0 < detail::kInterpOrder; ++j0) {
      std::size_t row = static_cast<std::size_t>(ax.wrap(base[0] + j0)) * n;
      Complex inner(0.0, 0.0);
      for (int j1 = 0; j1 < detail::kInterpOrder; ++j1)
        inner += w[1][j1] * u.values[row + ax.wrap(base[1] + j1)];
      acc += w[0][j0] * inner;
    }
  } else {
    for (int j0 = 0; j0 < detail::kInterpOrder; ++j0) {
      std::size_t plane = static_cast<std::size_t>(ax.wrap(base[0] + j0)) * n;
      Complex mid(0.0, 0.0);
      for (int j1 = 0; j1 < detail::kInterpOrder; ++j1) {
        std::size_t row = (plane + ax.wrap(base[1] + j1)) * n;
        Complex inner(0.0, 0.0);
        for (int j2 = 0; j2 < detail::kInterpOrder; ++j2)
          inner += w[2][j2] * u.values[row + ax.wrap(base[2] + j2)];
        mid += w[1][j1] * inner;
      }
      acc += w[0][j0] * mid;
    }
  }
  return acc;
}

// Interpolate a radial profile at r >= 0; even extension across r = 0,
// zero beyond r_max.
inline Complex interpolate_radial(const Field& u, double r) {
  const RadialGrid& g = u.rad();
  const int n = g.n_nodes();
  const double h = g.spacing();
  r = std::abs(r);
  if (r > g.r_max()) return Complex(0.0, 0.0);
  double s = r / h;
  int i0 = static_cast<int>(std::floor(s)) - (detail::kInterpOrder / 2 - 1);
  if (i0 + detail::kInterpOrder > n) i0 = n - detail::kInterpOrder;
  double w[detail::kInterpOrder];
  detail::lagrange_weights(s - i0, w);
  Complex acc(0.0, 0.0);
  for (int j = 0; j < detail::kInterpOrder; ++j) {
    int i = i0 + j;
    if (i < 0) i = -i;  // even reflection
    acc += w[j] * u.values[i];
  }
  return acc;
}

namespace detail {

// largest |x|_inf (cartesian) or r (radial) where the field is above
// 1e-7 of its peak; tails below that are irrelevant at the 1e-8 mass
// tolerance the rescale contract promises
inline double support_radius(const Field& u) {
  double thresh = 1e-7 * u.max_abs();
  double rad = 0.0;
  if (u.is_cartesian()) {
    const CartesianGrid& g = u.cart();
    std::array<int, 3> ijk;
    std::array<double, 3> x;
    for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
      if (std::abs(u.values[idx]) <= thresh) continue;
      g.unflatten(idx, ijk);
      g.point(ijk, x);
      for (int a = 0; a < g.dim(); ++a) rad = std::max(rad, std::abs(x[a]));
    }
  } else {
    const RadialGrid& g = u.rad();
    for (std::size_t i = 0; i < u.values.size(); ++i)
      if (std::abs(u.values[i]) > thresh) rad = std::max(rad, g.nodes()[i]);
  }
  return rad;
}

}  // namespace detail

// Embed a radial profile into a cartesian box by interpolation at |x|.
inline Field cartesian_from_radial(const Field& profile, CartesianGridPtr g,
                                   double dilation = 1.0, double amplitude = 1.0) {
  if (!profile.is_radial()) throw FieldError("cartesian_from_radial expects a radial field");
  return make_cartesian(
      g,
      [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < g->dim(); ++a) r2 += x[a] * x[a];
        return amplitude * interpolate_radial(profile, std::sqrt(r2) / dilation);
      },
      profile.tag + "|embedded");
}

inline Field rescale(const Field& u, double lambda, RescaleMode mode) {
  if (!(lambda > 0.0)) throw InvalidParameter("rescale requires lambda > 0");
  const int d = u.dim();
  double exponent = (mode == RescaleMode::mass_invariant) ? 0.5 * d : 0.5 * (d - 2);
  double amp = std::pow(lambda, exponent);

  if (lambda < 1.0) {
    double limit = u.is_cartesian() ? u.cart().box_half_length() : u.rad().r_max();
    if (detail::support_radius(u) / lambda > limit)
      throw SupportOverflow("rescaled support does not fit the grid");
  }

  Field out;
  out.grid = u.grid;
  out.tag = u.tag + "|rescaled";
  out.values.resize(u.values.size());
  if (u.is_cartesian()) {
    const CartesianGrid& g = u.cart();
    std::array<int, 3> ijk;
    std::array<double, 3> x;
    for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
      g.unflatten(idx, ijk);
      g.point(ijk, x);
      std::array<double, 3> y = {lambda * x[0], lambda * x[1], lambda * x[2]};
      out.values[idx] = amp * interpolate_cartesian(u, y);
    }
  } else {
    const RadialGrid& g = u.rad();
    for (int i = 0; i < g.n_nodes(); ++i)
      out.values[i] = amp * interpolate_radial(u, lambda * g.nodes()[i]);
  }
  return out;
}

}  // namespace nls
