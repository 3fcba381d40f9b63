#pragma once

// Variational functionals of the combined-nonlinearity equation.
//
//   M(u)      = int |u|^2
//   E(u)      = int 1/2 |grad u|^2 - 1/(p+1) |u|^(p+1) + d/(2(d+2)) |u|^(2(d+2)/d)
//   S_omega   = E + (omega/2) M                 (Lyapunov action)
//   K(u)      = d/dlambda|_{lambda=1} S_omega(T_lambda u)
//             = int |grad u|^2 - d(p-1)/(2(p+1)) |u|^(p+1) + d/(d+2) |u|^(2(d+2)/d)
//   H_omega   = S_omega - K/2 = (omega/2) M + (d(p-1)-4)/(4(p+1)) |u|^(p+1)_(p+1)
//
// with the mass-invariant scaling (T_lambda u)(x) = lambda^(d/2) u(lambda x).
// Every scaling-family quantity reduces to four base integrals
// (M, ||grad u||^2, L^{p+1} and mass-critical norms), collected in
// ScalingCoefficients so that lambda-families can be evaluated in closed
// form without re-gridding.

#include "nls/quadrature.hpp"

namespace nls {

struct FunctionalBundle {
  double mass = 0.0;
  double energy = 0.0;
  double action = 0.0;        // S_omega
  double K = 0.0;
  double K_quad = 0.0;        // ||grad u||^2
  double K_nonlin = 0.0;
  double H_omega = 0.0;
  double Lp1 = 0.0;           // ||u||^{p+1}_{L^{p+1}}
  double L_mass_crit = 0.0;   // ||u||^{2(d+2)/d}_{L^{2(d+2)/d}}
};

// Base integrals plus parameters; closed-form lambda families.
struct ScalingCoefficients {
  double mass = 0.0;
  double grad = 0.0;   // ||grad u||^2
  double lp1 = 0.0;
  double lmc = 0.0;
  int d = 1;
  double p = 0.0;
  double omega = 0.0;

  double beta() const { return 0.5 * d * (p - 1.0); }  // lambda exponent of Lp1

  double energy_at(double lam) const {
    double l2 = lam * lam;
    return 0.5 * l2 * grad - std::pow(lam, beta()) / (p + 1.0) * lp1 +
           d / (2.0 * (d + 2.0)) * l2 * lmc;
  }
  double action_at(double lam) const { return energy_at(lam) + 0.5 * omega * mass; }
  double K_at(double lam) const {
    double l2 = lam * lam;
    return l2 * grad - 0.5 * d * (p - 1.0) / (p + 1.0) * std::pow(lam, beta()) * lp1 +
           d / (d + 2.0) * l2 * lmc;
  }
  // g(lambda) = K(T_lambda u)/lambda^2, strictly decreasing in lambda
  double g_at(double lam) const {
    return grad + d / (d + 2.0) * lmc -
           0.5 * d * (p - 1.0) / (p + 1.0) * std::pow(lam, beta() - 2.0) * lp1;
  }
  double H_at(double lam) const {
    return 0.5 * omega * mass +
           (d * (p - 1.0) - 4.0) / (4.0 * (p + 1.0)) * std::pow(lam, beta()) * lp1;
  }

  FunctionalBundle bundle_at(double lam) const {
    FunctionalBundle b;
    double l2 = lam * lam;
    double lb = std::pow(lam, beta());
    b.mass = mass;
    b.K_quad = l2 * grad;
    b.Lp1 = lb * lp1;
    b.L_mass_crit = l2 * lmc;
    b.energy = 0.5 * b.K_quad - b.Lp1 / (p + 1.0) + d / (2.0 * (d + 2.0)) * b.L_mass_crit;
    b.action = b.energy + 0.5 * omega * b.mass;
    b.K_nonlin = -0.5 * d * (p - 1.0) / (p + 1.0) * b.Lp1 + d / (d + 2.0) * b.L_mass_crit;
    b.K = b.K_quad + b.K_nonlin;
    b.H_omega = b.action - 0.5 * b.K;
    return b;
  }
};

inline ScalingCoefficients scaling_coefficients(const Field& u, const Params& params) {
  if (!u.all_finite()) throw FieldError("functional evaluation on a non-finite field");
  ScalingCoefficients c;
  c.d = params.d;
  c.p = params.p;
  c.omega = params.omega;
  c.lp1 = quadrature_Lq(u, params.p + 1.0);
  c.lmc = quadrature_Lq(u, params.mass_critical_power());
  if (u.is_cartesian()) {
    SpectralField s = forward_transform(u);
    c.mass = spectral_mass(s);   // Parseval; consistent with quadrature to 1e-12
    c.grad = spectral_gradient_norm_sq(s);
  } else {
    c.mass = quadrature_Lq(u, 2.0);
    c.grad = gradient_norm_sq(u);
  }
  return c;
}

inline FunctionalBundle evaluate(const Field& u, const Params& params) {
  return scaling_coefficients(u, params).bundle_at(1.0);
}

// --------------------------------------------------------------------------
// Energy-critical functionals (d = 3): K0, H0, E0 and the Sobolev ratio.
// --------------------------------------------------------------------------

struct CriticalBundle {
  double K0 = 0.0;             // int |grad u|^2 - |u|^6
  double H0 = 0.0;             // (1/3) ||u||^6_{L^6}
  double E0 = 0.0;             // int 1/2 |grad u|^2 - 1/6 |u|^6
  double sobolev_ratio = 0.0;  // ||grad u||_{L^2} / ||u||_{L^6}
  double grad = 0.0;
  double L6 = 0.0;
};

inline CriticalBundle evaluate_critical(const Field& u, const Params& params) {
  if (params.d != 3) throw InvalidParameter("critical functionals require d = 3");
  if (!u.all_finite()) throw FieldError("functional evaluation on a non-finite field");
  CriticalBundle b;
  b.grad = gradient_norm_sq(u);
  b.L6 = quadrature_Lq(u, 6.0);
  b.K0 = b.grad - b.L6;
  b.H0 = b.L6 / 3.0;
  b.E0 = 0.5 * b.grad - b.L6 / 6.0;
  b.sobolev_ratio = (b.L6 > 0.0) ? std::sqrt(b.grad) / std::pow(b.L6, 1.0 / 6.0) : 0.0;
  return b;
}

// --------------------------------------------------------------------------
// Unique sign-change scale: the root lambda_0 of K(T_lambda u).
// Bisection on the monotone g(lambda) = K(T_lambda u)/lambda^2, evaluated by
// the closed-form lambda expansion (no re-gridding).
// --------------------------------------------------------------------------

inline double find_lambda_zero(const ScalingCoefficients& c) {
  if (c.mass == 0.0 && c.grad == 0.0 && c.lp1 == 0.0)
    throw InvalidParameter("find_lambda_zero: field is zero");
  if (c.lp1 <= 0.0)
    throw SolverError("find_lambda_zero: no sign change, L^{p+1} term vanishes");
  double lo = 1e-3, hi = 1e3;
  // expand until the bracket straddles the root
  while (c.g_at(lo) <= 0.0) {
    lo *= 1e-1;
    if (lo < 1e-12) throw SolverError("lambda_0 below representable scaling range");
  }
  while (c.g_at(hi) >= 0.0) {
    hi *= 10.0;
    if (hi > 1e12) throw SolverError("lambda_0 above representable scaling range");
  }
  while (hi - lo > 1e-12 * hi) {
    double mid = 0.5 * (lo + hi);
    (c.g_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double find_lambda_zero(const Field& u, const Params& params) {
  return find_lambda_zero(scaling_coefficients(u, params));
}

// --------------------------------------------------------------------------
// Scaling identities (virial-type algebra):
//   (2 - L) S_omega = omega M + (d(p-1)-4)/(2(p+1)) ||u||^{p+1}
//   L (2 - L) S_omega = d(p-1)(d(p-1)-4)/(4(p+1)) ||u||^{p+1}
// where L F = d/dlambda|_1 F(T_lambda .). Residuals are normalized by the
// magnitude of the participating terms.
// --------------------------------------------------------------------------

struct IdentityReport {
  double eq_first_residual = 0.0;   // (2-L) S identity
  double eq_second_residual = 0.0;  // L(2-L) S identity
  double fd_derivative_rel = 0.0;   // central-difference dS/dlambda|_1 vs K
};

inline IdentityReport scaling_identities_check(const Field& u, const Params& params) {
  ScalingCoefficients c = scaling_coefficients(u, params);
  FunctionalBundle b = c.bundle_at(1.0);
  const double d = params.d, p = params.p;
  IdentityReport r;

  double lhs1 = 2.0 * b.action - b.K;
  double rhs1 = params.omega * b.mass + (d * (p - 1.0) - 4.0) / (2.0 * (p + 1.0)) * b.Lp1;
  double scale1 = std::abs(lhs1) + std::abs(rhs1) + 1e-300;
  r.eq_first_residual = std::abs(lhs1 - rhs1) / scale1;

  // L K via the closed-form lambda family: LK = 2(grad + (d/(d+2)) lmc) - beta B
  double B = 0.5 * d * (p - 1.0) / (p + 1.0) * c.lp1;
  double LK = 2.0 * (c.grad + d / (d + 2.0) * c.lmc) - c.beta() * B;
  double lhs2 = 2.0 * b.K - LK;  // L(2-L) S = 2K - LK
  double rhs2 = d * (p - 1.0) * (d * (p - 1.0) - 4.0) / (4.0 * (p + 1.0)) * b.Lp1;
  double scale2 = std::abs(lhs2) + std::abs(rhs2) + 1e-300;
  r.eq_second_residual = std::abs(lhs2 - rhs2) / scale2;

  const double step = 1e-4;
  double fd = (c.action_at(1.0 + step) - c.action_at(1.0 - step)) / (2.0 * step);
  double denom = std::abs(b.K) + 1e-12;
  r.fd_derivative_rel = std::abs(fd - b.K) / denom;
  return r;
}

// --------------------------------------------------------------------------
// Energy trapping (two-sided comparison on {K >= 0}):
//   c_trap * G(u) <= E(u) <= G(u),
//   G(u) = int 1/2 |grad u|^2 + d/(2(d+2)) |u|^(2(d+2)/d),
//   c_trap = (d(p-1)-4)/(d(p-1)).
// --------------------------------------------------------------------------

inline double trapping_constant(const Params& params) {
  double dp = params.d * (params.p - 1.0);
  return (dp - 4.0) / dp;
}

inline double positive_energy_part(const FunctionalBundle& b, const Params& params) {
  return 0.5 * b.K_quad + params.d / (2.0 * (params.d + 2.0)) * b.L_mass_crit;
}

}  // namespace nls
