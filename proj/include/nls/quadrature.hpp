#pragma once

// Grid quadrature of |u|^q, gradient norms, momentum.
//
// Cartesian integrals are plain cell sums (spectrally accurate for smooth
// periodic data); the gradient norm is evaluated in Fourier space. Radial
// integrals use the grid's Gregory weights; the radial derivative is a
// fourth-order finite difference with one-sided closure at the ends.

#include "nls/transforms.hpp"

namespace nls {

// integral |u|^q dx
inline double quadrature_Lq(const Field& u, double q) {
  if (q < 1.0) throw InvalidParameter("quadrature_Lq requires q >= 1");
  KahanSum sum;
  if (u.is_cartesian()) {
    for (const auto& v : u.values) sum.add(pow_abs2(std::norm(v), q));
    return sum.value() * u.cart().cell_volume();
  }
  const auto& w = u.rad().weights();
  for (std::size_t i = 0; i < u.values.size(); ++i)
    sum.add(w[i] * pow_abs2(std::norm(u.values[i]), q));
  return sum.value();
}

// sum_k |u_hat|^2 weighted by g(|k|^2), times the box volume
inline double spectral_weighted_sum(const SpectralField& s,
                                    const std::function<double(double)>& g) {
  const CartesianGrid& grid = *s.grid;
  KahanSum sum;
  std::array<int, 3> ijk;
  std::array<double, 3> k;
  for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
    grid.unflatten(idx, ijk);
    grid.wavevector(ijk, k);
    double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    sum.add(g(k2) * std::norm(s.coeffs[idx]));
  }
  return sum.value() * grid.volume();
}

inline double spectral_mass(const SpectralField& s) {
  KahanSum sum;
  for (const auto& c : s.coeffs) sum.add(std::norm(c));
  return sum.value() * s.grid->volume();
}

inline double spectral_gradient_norm_sq(const SpectralField& s) {
  return spectral_weighted_sum(s, [](double k2) { return k2; });
}

// 4th-order finite-difference first derivative on a uniform 1d array,
// one-sided at the ends
inline std::vector<Complex> fd_derivative(const std::vector<Complex>& f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw FieldError("fd_derivative needs at least 5 nodes");
  std::vector<Complex> df(n);
  const double c = 1.0 / (12.0 * h);
  df[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  df[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    df[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  df[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] -
                    6.0 * f[n - 4] + f[n - 5]);
  df[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] +
                    16.0 * f[n - 4] - 3.0 * f[n - 5]);
  return df;
}

inline double gradient_norm_sq(const Field& u) {
  if (u.is_cartesian()) {
    SpectralField s = forward_transform(u);
    return spectral_gradient_norm_sq(s);
  }
  const RadialGrid& g = u.rad();
  std::vector<Complex> du = fd_derivative(u.values, g.spacing());
  KahanSum sum;
  for (std::size_t i = 0; i < du.size(); ++i)
    sum.add(g.weights()[i] * std::norm(du[i]));
  return sum.value();
}

// P = Im integral conj(u) grad u dx (cartesian only; identically zero for
// radially symmetric data)
inline std::array<double, 3> momentum(const SpectralField& s) {
  const CartesianGrid& g = *s.grid;
  KahanSum sums[3];
  std::array<int, 3> ijk;
  std::array<double, 3> k;
  for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
    g.unflatten(idx, ijk);
    g.wavevector(ijk, k);
    double a2 = std::norm(s.coeffs[idx]);
    for (int a = 0; a < g.dim(); ++a) sums[a].add(k[a] * a2);
  }
  std::array<double, 3> p = {0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) p[a] = sums[a].value() * g.volume();
  return p;
}

}  // namespace nls
