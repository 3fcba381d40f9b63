#pragma once

// Independent oracles for the test suite. Everything here is deliberately
// naive (O(n^2) DFTs, quadrature of closed forms, brute-force scans) and
// shares no code path with the library implementations it checks.

#include <complex>
#include <random>
#include <vector>

#include "nls/nls.hpp"

namespace oracles {

using nls::Complex;

// plain O(n^2) DFT with the same normalization as nls::forward_transform
// (series coefficients: u_j = sum_k uhat_k exp(i k x_j))
inline std::vector<Complex> naive_dft_1d(const std::vector<Complex>& u) {
  const std::size_t n = u.size();
  std::vector<Complex> uhat(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      acc += u[j] * std::polar(1.0, -2.0 * nls::pi * double(k * j % n) / double(n));
    uhat[k] = acc / double(n);
  }
  return uhat;
}

// free Schrodinger propagator by naive DFT (1d)
inline std::vector<Complex> naive_free_propagate_1d(const std::vector<Complex>& u,
                                                    double L, double t) {
  const std::size_t n = u.size();
  std::vector<Complex> uhat = naive_dft_1d(u);
  std::vector<Complex> out(n, Complex(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      long m = (k < n / 2) ? long(k) : long(k) - long(n);
      double kk = nls::pi / L * double(m);
      Complex coeff = uhat[k] * std::polar(1.0, -kk * kk * t);
      acc += coeff * std::polar(1.0, 2.0 * nls::pi * double(k * j % n) / double(n));
    }
    out[j] = acc;
  }
  return out;
}

// first integral of the d=1 ground-state ODE: at r=0 with Q'(0)=0 and decay,
//   omega Q0^2 / 2 + Q0^(2+4/d)/(2+4/d) - Q0^(p+1)/(p+1) = 0.
// Returns Q0 by bisection on the bracketing interval.
inline double ground_state_amplitude_1d(double p, double omega) {
  auto f = [&](double q) {
    return std::pow(q, p + 1.0) / (p + 1.0) - std::pow(q, 6.0) / 6.0 -
           0.5 * omega * q * q;
  };
  double lo = 1e-3, hi = 1.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  while (f(lo) >= 0.0) lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// finite-difference residual of the radial ground-state equation, written
// independently of the solver's residual routine (2nd-order stencils on a
// thinned grid keep it honest and cheap)
inline double fd_residual_sup(const nls::Field& profile, const nls::Params& params) {
  const nls::RadialGrid& g = profile.rad();
  const double h = g.spacing();
  double sup = 0.0;
  for (int i = 1; i + 1 < g.n_nodes(); ++i) {
    double qm = profile.values[i - 1].real();
    double q0 = profile.values[i].real();
    double qp = profile.values[i + 1].real();
    double d1 = (qp - qm) / (2.0 * h);
    double d2 = (qp - 2.0 * q0 + qm) / (h * h);
    double lap = d2 + (params.d - 1) * d1 / g.nodes()[i];
    double res = lap - params.omega * q0 + std::pow(q0, params.p) -
                 std::pow(q0, 1.0 + 4.0 / params.d);
    sup = std::max(sup, std::abs(res));
  }
  return sup;
}

// closed forms for Gaussian integrals used as frozen expected values
inline double gaussian_l2_1d() { return std::sqrt(nls::pi / 2.0); }             // int e^{-2x^2}
inline double gaussian_second_moment_1d() { return 0.25 * std::sqrt(nls::pi / 2.0); }

}  // namespace oracles
