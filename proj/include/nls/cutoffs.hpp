#pragma once

// Virial cutoff weights phi_R(x) = R^2 phi(|x|/R), sampled with their first
// four radial derivatives so that grad, Hessian, Laplacian and bilaplacian
// are available in closed form on the grid.
//
// scattering_cutoff: phi(r) = r^2 on [0,1], blended to 0 over [1,2] by a
// 9th-order smoothstep (C^4 at both junctions, so the bilaplacian stays
// classical), identically 0 beyond 2.
//
// blowup_cutoff: phi'' = 2 on [0,1], dips through a C^3 bump on [1,3] tuned
// so phi'(3) = 0, constant (= 3) beyond 3; phi'' <= 2 everywhere.

#include "nls/field.hpp"

namespace nls {

enum class CutoffKind { scattering, blowup };

namespace cutoff_detail {

// s(t) = 126 t^5 - 420 t^6 + 540 t^7 - 315 t^8 + 70 t^9 and derivatives;
// s', s'', s''', s'''' all vanish at t = 0 and t = 1
inline double smooth9(int deriv, double t) {
  static const double c[5] = {126.0, -420.0, 540.0, -315.0, 70.0};
  double acc = 0.0;
  for (int j = 0; j < 5; ++j) {
    double expo = 5.0 + j;
    double coef = c[j];
    for (int k = 0; k < deriv; ++k) coef *= (expo - k);
    acc += coef * std::pow(t, expo - deriv);
  }
  return acc;
}

// bump w(t) = 256 t^4 (1-t)^4 pieces for the blowup weight
inline double bump(double t) {
  double a = t * (1.0 - t);
  return 256.0 * a * a * a * a;
}
inline double bump_d1(double t) {
  double a = t * (1.0 - t);
  return 1024.0 * a * a * a * (1.0 - 2.0 * t);
}
inline double bump_d2(double t) {
  double a = t * (1.0 - t);
  double b = 1.0 - 2.0 * t;
  return 1024.0 * a * a * (3.0 * b * b - 2.0 * a);
}
inline double bump_int(double t) {  // int_0^t w
  double t5 = std::pow(t, 5.0);
  return 256.0 * (t5 / 5.0 - 2.0 * t5 * t / 3.0 + 6.0 * t5 * t * t / 7.0 -
                  t5 * t * t * t / 2.0 + t5 * t * t * t * t / 9.0);
}
inline double bump_int2(double t) {  // int_0^t int_0^s w
  double t6 = std::pow(t, 6.0);
  return 256.0 * (t6 / 30.0 - 2.0 * t6 * t / 21.0 + 3.0 * t6 * t * t / 28.0 -
                  t6 * t * t * t / 18.0 + t6 * t * t * t * t / 90.0);
}
inline double smooth9_int(double t) {  // int_0^t s
  double t6 = std::pow(t, 6.0);
  return 21.0 * t6 - 60.0 * t6 * t + 67.5 * t6 * t * t - 35.0 * t6 * t * t * t +
         7.0 * t6 * t * t * t * t;
}
inline double smooth9_int2(double t) {  // int_0^t int_0^s
  double t7 = std::pow(t, 7.0);
  return 3.0 * t7 - 7.5 * t7 * t + 7.5 * t7 * t * t - 3.5 * t7 * t * t * t +
         (7.0 / 11.0) * t7 * t * t * t * t;
}

// phi'' = 2 (1 - s(theta)) - kBumpAmp w(theta) on the taper: both factors
// vanish with four derivatives at theta = 0 and 1, phi''(3) = 0, and the
// amplitude is tuned so phi'(3) = 0 exactly
inline constexpr double kBumpAmp = 630.0 / 128.0;

}  // namespace cutoff_detail

// phi and radial derivatives, deriv in 0..4
inline double cutoff_profile(CutoffKind kind, int deriv, double rho) {
  using namespace cutoff_detail;
  if (rho < 0.0) rho = -rho;
  if (kind == CutoffKind::scattering) {
    if (rho <= 1.0) {
      switch (deriv) {
        case 0: return rho * rho;
        case 1: return 2.0 * rho;
        case 2: return 2.0;
        default: return 0.0;
      }
    }
    if (rho >= 2.0) return 0.0;
    double t = rho - 1.0;
    double s0 = smooth9(0, t), s1 = smooth9(1, t), s2 = smooth9(2, t);
    switch (deriv) {
      case 0: return rho * rho * (1.0 - s0);
      case 1: return 2.0 * rho * (1.0 - s0) - rho * rho * s1;
      case 2: return 2.0 * (1.0 - s0) - 4.0 * rho * s1 - rho * rho * s2;
      case 3: return -6.0 * s1 - 6.0 * rho * s2 - rho * rho * smooth9(3, t);
      case 4:
        return -12.0 * s2 - 8.0 * rho * smooth9(3, t) - rho * rho * smooth9(4, t);
      default: throw InvalidParameter("cutoff derivative order out of range");
    }
  }
  // blowup kind
  if (rho <= 1.0) {
    switch (deriv) {
      case 0: return rho * rho;
      case 1: return 2.0 * rho;
      case 2: return 2.0;
      default: return 0.0;
    }
  }
  const double phi_flat = 9.0 - 8.0 * smooth9_int2(1.0) - 4.0 * kBumpAmp * bump_int2(1.0);
  if (rho >= 3.0) return deriv == 0 ? phi_flat : 0.0;
  double theta = 0.5 * (rho - 1.0);
  switch (deriv) {
    case 0:
      return rho * rho - 8.0 * smooth9_int2(theta) - 4.0 * kBumpAmp * bump_int2(theta);
    case 1:
      return 2.0 * rho - 4.0 * smooth9_int(theta) - 2.0 * kBumpAmp * bump_int(theta);
    case 2: return 2.0 * (1.0 - smooth9(0, theta)) - kBumpAmp * bump(theta);
    case 3: return -smooth9(1, theta) - 0.5 * kBumpAmp * bump_d1(theta);
    case 4: return -0.5 * smooth9(2, theta) - 0.25 * kBumpAmp * bump_d2(theta);
    default: throw InvalidParameter("cutoff derivative order out of range");
  }
}

// where the weight becomes constant/zero, in units of R
inline double cutoff_outer_radius(CutoffKind kind) {
  return kind == CutoffKind::scattering ? 2.0 : 3.0;
}

struct CutoffWeight {
  CutoffKind kind = CutoffKind::scattering;
  double R = 1.0;
  GridRef grid;

  std::vector<double> phi_R;    // R^2 phi(|x|/R)
  std::vector<double> lap;      // Delta phi_R
  std::vector<double> bilap;    // Delta^2 phi_R
  // cartesian grids
  std::vector<double> grad[3];  // d/dx_a phi_R
  std::vector<double> hess[6];  // upper triangle (00,01,02,11,12,22)
  // radial grids
  std::vector<double> dphi;     // d/dr phi_R
  std::vector<double> hess_rr;  // phi''(|x|/R)

  static int hess_index(int a, int b) {
    if (a > b) std::swap(a, b);
    static const int map3[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return map3[a][b];
  }
};

namespace cutoff_detail {

struct PointSamples {
  double phi_R, dphi, lap, bilap, phi2, dphi_over_rho;
};

inline PointSamples sample(CutoffKind kind, double R, int d, double r) {
  PointSamples s{};
  double rho = r / R;
  if (rho <= 1.0) {
    // exact core: phi_R = |x|^2, grad = 2x, Hessian = 2I
    s.phi_R = r * r;
    s.dphi = 2.0 * r;
    s.lap = 2.0 * d;
    s.bilap = 0.0;
    s.phi2 = 2.0;
    s.dphi_over_rho = 2.0;
    return s;
  }
  double p0 = cutoff_profile(kind, 0, rho);
  double p1 = cutoff_profile(kind, 1, rho);
  double p2 = cutoff_profile(kind, 2, rho);
  double p3 = cutoff_profile(kind, 3, rho);
  double p4 = cutoff_profile(kind, 4, rho);
  s.phi_R = R * R * p0;
  s.dphi = R * p1;
  s.phi2 = p2;
  s.dphi_over_rho = p1 / rho;
  s.lap = p2 + (d - 1) * p1 / rho;
  double H1 = p3 + (d - 1) * (p2 * rho - p1) / (rho * rho);
  double H2 = p4 + (d - 1) * (p3 * rho * rho - 2.0 * p2 * rho + 2.0 * p1) /
                       (rho * rho * rho);
  s.bilap = (H2 + (d - 1) * H1 / rho) / (R * R);
  return s;
}

}  // namespace cutoff_detail

inline CutoffWeight make_cutoff(CutoffKind kind, double R, const GridRef& grid) {
  if (!(R > 0.0)) throw InvalidParameter("cutoff radius must be positive");
  CutoffWeight w;
  w.kind = kind;
  w.R = R;
  w.grid = grid;

  if (std::holds_alternative<CartesianGridPtr>(grid)) {
    const CartesianGrid& g = *std::get<CartesianGridPtr>(grid);
    const int d = g.dim();
    std::size_t n = g.size();
    w.phi_R.resize(n);
    w.lap.resize(n);
    w.bilap.resize(n);
    for (int a = 0; a < d; ++a) w.grad[a].resize(n);
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) w.hess[CutoffWeight::hess_index(a, b)].resize(n);

    std::array<int, 3> ijk;
    std::array<double, 3> x;
    for (std::size_t idx = 0; idx < n; ++idx) {
      g.unflatten(idx, ijk);
      g.point(ijk, x);
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
      double r = std::sqrt(r2);
      auto s = cutoff_detail::sample(kind, R, d, r);
      w.phi_R[idx] = s.phi_R;
      w.lap[idx] = s.lap;
      w.bilap[idx] = s.bilap;
      if (r == 0.0) {
        for (int a = 0; a < d; ++a) w.grad[a][idx] = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = a; b < d; ++b)
            w.hess[CutoffWeight::hess_index(a, b)][idx] = (a == b) ? 2.0 : 0.0;
        continue;
      }
      for (int a = 0; a < d; ++a) w.grad[a][idx] = s.dphi * x[a] / r;
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
          double ee = x[a] * x[b] / r2;
          double val = s.phi2 * ee + s.dphi_over_rho * ((a == b ? 1.0 : 0.0) - ee);
          w.hess[CutoffWeight::hess_index(a, b)][idx] = val;
        }
    }
  } else {
    const RadialGrid& g = *std::get<RadialGridPtr>(grid);
    const int d = g.dim();
    std::size_t n = g.size();
    w.phi_R.resize(n);
    w.lap.resize(n);
    w.bilap.resize(n);
    w.dphi.resize(n);
    w.hess_rr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto s = cutoff_detail::sample(kind, R, d, g.nodes()[i]);
      w.phi_R[i] = s.phi_R;
      w.lap[i] = s.lap;
      w.bilap[i] = s.bilap;
      w.dphi[i] = s.dphi;
      w.hess_rr[i] = s.phi2;
    }
  }
  return w;
}

}  // namespace nls
