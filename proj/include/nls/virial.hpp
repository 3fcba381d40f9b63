#pragma once

// Virial quantity and its flow derivatives:
//   V_R(t)   = int phi_R |u|^2
//   V_R'(t)  = 2 Im int conj(u) grad(phi_R) . grad(u)
//   V_R''(t) = 4 Re int hess(phi_R)_{ab} d_a conj(u) d_b u
//              - int Delta^2 phi_R |u|^2
//              - 2(p-1)/(p+1) int Delta phi_R |u|^(p+1)
//              + 4/(d+2)      int Delta phi_R |u|^(2(d+2)/d)
// For data supported in |x| <= R the Hessian is 2I and Delta phi_R = 2d
// there, so V_R'' collapses to 8 K(u).

#include "nls/cutoffs.hpp"
#include "nls/quadrature.hpp"

namespace nls {

inline void require_matching(const Field& u, const CutoffWeight& w) {
  if (u.is_cartesian() != std::holds_alternative<CartesianGridPtr>(w.grid))
    throw FieldError("cutoff weight and field live on different grid kinds");
  if (u.is_cartesian()) {
    if (!u.cart().same_as(*std::get<CartesianGridPtr>(w.grid)))
      throw FieldError("cutoff weight grid mismatch");
  } else if (!u.rad().same_as(*std::get<RadialGridPtr>(w.grid))) {
    throw FieldError("cutoff weight grid mismatch");
  }
}

inline double virial(const Field& u, const CutoffWeight& w) {
  require_matching(u, w);
  KahanSum sum;
  if (u.is_cartesian()) {
    for (std::size_t i = 0; i < u.values.size(); ++i)
      sum.add(w.phi_R[i] * std::norm(u.values[i]));
    return sum.value() * u.cart().cell_volume();
  }
  const auto& qw = u.rad().weights();
  for (std::size_t i = 0; i < u.values.size(); ++i)
    sum.add(qw[i] * w.phi_R[i] * std::norm(u.values[i]));
  return sum.value();
}

struct VirialDerivatives {
  double Vp = 0.0;
  double Vpp = 0.0;
};

inline VirialDerivatives virial_derivatives(const Field& u, const CutoffWeight& w,
                                            const Params& params) {
  require_matching(u, w);
  const double p = params.p;
  const int d = params.d;
  const double coef_p = -2.0 * (p - 1.0) / (p + 1.0);
  const double coef_mc = 4.0 / (d + 2.0);
  const double q_mc = params.mass_critical_power();

  VirialDerivatives out;
  if (u.is_cartesian()) {
    const CartesianGrid& g = u.cart();
    SpectralField s = forward_transform(u);
    std::vector<Field> du(d);
    for (int a = 0; a < d; ++a) du[a] = spectral_derivative(s, a);

    KahanSum vp, hess_term, bilap_term, lap_p, lap_mc;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      Complex ubar = std::conj(u.values[i]);
      Complex dot(0.0, 0.0);
      for (int a = 0; a < d; ++a) dot += w.grad[a][i] * du[a].values[i];
      vp.add((ubar * dot).imag());
      double hh = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double hab = w.hess[CutoffWeight::hess_index(a, b)][i];
          hh += hab * (std::conj(du[a].values[i]) * du[b].values[i]).real();
        }
      hess_term.add(hh);
      double a2 = std::norm(u.values[i]);
      bilap_term.add(w.bilap[i] * a2);
      lap_p.add(w.lap[i] * pow_abs2(a2, p + 1.0));
      lap_mc.add(w.lap[i] * pow_abs2(a2, q_mc));
    }
    double vol = g.cell_volume();
    out.Vp = 2.0 * vp.value() * vol;
    out.Vpp = (4.0 * hess_term.value() - bilap_term.value() + coef_p * lap_p.value() +
               coef_mc * lap_mc.value()) * vol;
    return out;
  }

  const RadialGrid& g = u.rad();
  std::vector<Complex> du = fd_derivative(u.values, g.spacing());
  KahanSum vp, hess_term, bilap_term, lap_p, lap_mc;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    double qw = g.weights()[i];
    vp.add(qw * (std::conj(u.values[i]) * w.dphi[i] * du[i]).imag());
    hess_term.add(qw * w.hess_rr[i] * std::norm(du[i]));
    double a2 = std::norm(u.values[i]);
    bilap_term.add(qw * w.bilap[i] * a2);
    lap_p.add(qw * w.lap[i] * pow_abs2(a2, p + 1.0));
    lap_mc.add(qw * w.lap[i] * pow_abs2(a2, q_mc));
  }
  out.Vp = 2.0 * vp.value();
  out.Vpp = 4.0 * hess_term.value() - bilap_term.value() + coef_p * lap_p.value() +
            coef_mc * lap_mc.value();
  return out;
}

struct VirialValues {
  double V = 0.0;
  double Vp = 0.0;
  double Vpp = 0.0;
};

// Bundles a cutoff for per-step evaluation along a trajectory.
struct VirialProbe {
  CutoffWeight weight;

  VirialValues evaluate(const Field& u, const Params& params) const {
    VirialValues v;
    v.V = virial(u, weight);
    auto dv = virial_derivatives(u, weight, params);
    v.Vp = dv.Vp;
    v.Vpp = dv.Vpp;
    return v;
  }
};

}  // namespace nls
