#pragma once

// Runtime diagnostics over trajectories: virial identity consistency,
// radial Sobolev inequalities, trapping monitors, and the dynamical
// Scatter / Blowup / Undecided verdict.

#include <map>

#include "nls/evolution.hpp"
#include "nls/threshold.hpp"

namespace nls {

// --------------------------------------------------------------------------
// Virial identity along a recorded run: compares finite differences of the
// V series against the closed-form V' and V'' integrands.
// --------------------------------------------------------------------------

struct VirialIdentityReport {
  double max_second_residual = 0.0;  // |d2V/dt2 - Vpp| / (|Vpp| + eps)
  double max_first_residual = 0.0;   // |dV/dt - Vp| / (|Vp| + eps)
};

inline VirialIdentityReport virial_identity_check(const Trajectory& tr,
                                                  double eps_abs = 1e-12) {
  const auto& s = tr.series;
  if (s.size() < 5) throw InvalidParameter("virial identity check needs >= 5 records");
  VirialIdentityReport rep;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    double t0 = s[i - 1].t, t1 = s[i].t, t2 = s[i + 1].t;
    double h1 = t1 - t0, h2 = t2 - t1;
    // nonuniform 3-point formulas (quadratic fit)
    double fd2 = 2.0 * (h1 * s[i + 1].V - (h1 + h2) * s[i].V + h2 * s[i - 1].V) /
                 (h1 * h2 * (h1 + h2));
    double fd1 = (s[i + 1].V * h1 * h1 - s[i - 1].V * h2 * h2 +
                  s[i].V * (h2 * h2 - h1 * h1)) / (h1 * h2 * (h1 + h2));
    rep.max_second_residual =
        std::max(rep.max_second_residual,
                 std::abs(fd2 - s[i].Vpp) / (std::abs(s[i].Vpp) + eps_abs));
    rep.max_first_residual =
        std::max(rep.max_first_residual,
                 std::abs(fd1 - s[i].Vp) / (std::abs(s[i].Vp) + eps_abs));
  }
  return rep;
}

// --------------------------------------------------------------------------
// Radial Sobolev inequalities on the exterior region |x| >= R:
//   ||u||^{p+1}_{L^{p+1}} <= C / R^{(d-1)(p-1)/2} ||u||^{(p+3)/2} ||grad u||^{(p-1)/2}
//   ||u||^{q}_{L^{q}}     <= C / R^{2(d-1)/d}     ||u||^{2(d+1)/d} ||grad u||^{2/d}
// (q = 2(d+2)/d, norms on |x| >= R). The report carries the implied
// constants; the pointwise-derivation bound is (2/|S^{d-1}|)^{power}.
// --------------------------------------------------------------------------

struct RadialSobolevReport {
  double lhs_p = 0.0, implied_const_p = 0.0, bound_p = 0.0;
  double lhs_mc = 0.0, implied_const_mc = 0.0, bound_mc = 0.0;
  double exterior_mass = 0.0;
};

inline RadialSobolevReport radial_sobolev_check(const Field& u, double R,
                                                const Params& params) {
  if (!u.is_radial()) throw FieldError("radial Sobolev check expects a radial field");
  if (params.d < 2) throw InvalidParameter("radial Sobolev check needs d >= 2");
  const RadialGrid& g = u.rad();
  const int d = params.d;
  const double p = params.p;

  KahanSum m2, grad2, lp1, lmc;
  std::vector<Complex> du = fd_derivative(u.values, g.spacing());
  for (int i = 0; i < g.n_nodes(); ++i) {
    if (g.nodes()[i] < R) continue;
    double w = g.weights()[i];
    double a2 = std::norm(u.values[i]);
    m2.add(w * a2);
    grad2.add(w * std::norm(du[i]));
    lp1.add(w * pow_abs2(a2, p + 1.0));
    lmc.add(w * pow_abs2(a2, params.mass_critical_power()));
  }

  RadialSobolevReport rep;
  rep.exterior_mass = m2.value();
  double mass_norm = std::sqrt(std::max(m2.value(), 0.0));
  double grad_norm = std::sqrt(std::max(grad2.value(), 0.0));

  double rhs_p = std::pow(R, -0.5 * (d - 1) * (p - 1.0)) *
                 std::pow(mass_norm, 0.5 * (p + 3.0)) *
                 std::pow(grad_norm, 0.5 * (p - 1.0));
  rep.lhs_p = lp1.value();
  rep.implied_const_p = (rhs_p > 0.0) ? rep.lhs_p / rhs_p : 0.0;
  rep.bound_p = std::pow(2.0 / surface_area_unit_sphere(d), 0.5 * (p - 1.0));

  double rhs_mc = std::pow(R, -2.0 * (d - 1) / d) *
                  std::pow(mass_norm, 2.0 * (d + 1) / d) * std::pow(grad_norm, 2.0 / d);
  rep.lhs_mc = lmc.value();
  rep.implied_const_mc = (rhs_mc > 0.0) ? rep.lhs_mc / rhs_mc : 0.0;
  rep.bound_mc = std::pow(2.0 / surface_area_unit_sphere(d), 2.0 / d);
  return rep;
}

// --------------------------------------------------------------------------
// Dynamical verdict.
//   Blowup  <=> the run terminated on the gradient blowup criterion.
//   Scatter <=> completed, spacetime-norm increments over the final 20% of
//               the run are < tail_share of the total for both norms, and
//               the L^{p+1} amplitude decayed below amp_ratio of its
//               initial value.
// --------------------------------------------------------------------------

struct OutcomeThresholds {
  double tail_share = 0.01;
  double amp_ratio = 0.1;
};

enum class Outcome { Scatter, Blowup, Undecided };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Scatter: return "Scatter";
    case Outcome::Blowup: return "Blowup";
    default: return "Undecided";
  }
}

struct Verdict {
  Outcome outcome = Outcome::Undecided;
  std::map<std::string, double> evidence;
  bool theory_consistent = false;
};

inline Verdict classify_outcome(const Trajectory& tr, const MembershipVerdict& membership,
                                const Params& params,
                                const OutcomeThresholds& th = OutcomeThresholds{}) {
  if (tr.series.empty()) throw InvalidParameter("classify_outcome needs a trajectory");
  Verdict v;
  const auto& first = tr.series.front();
  const auto& last = tr.series.back();

  double t_final = last.t;
  double t_tail = 0.8 * t_final;
  double tail_mc = 0.0, tail_p = 0.0;
  for (const auto& rec : tr.series) {
    if (rec.t >= t_tail) {
      tail_mc = tr.spacetime_mc_norm - rec.cum_mc_norm;
      tail_p = tr.spacetime_p_norm - rec.cum_p_norm;
      break;
    }
  }
  double share_mc = (tr.spacetime_mc_norm > 0.0) ? tail_mc / tr.spacetime_mc_norm : 0.0;
  double share_p = (tr.spacetime_p_norm > 0.0) ? tail_p / tr.spacetime_p_norm : 0.0;
  double amp0 = std::pow(first.bundle.Lp1, 1.0 / (params.p + 1.0));
  double amp1 = std::pow(last.bundle.Lp1, 1.0 / (params.p + 1.0));
  double amp_ratio = (amp0 > 0.0) ? amp1 / amp0 : 0.0;
  double grad_growth = (first.bundle.K_quad > 0.0)
                           ? std::sqrt(last.bundle.K_quad / first.bundle.K_quad)
                           : 0.0;

  v.evidence["t_final"] = t_final;
  v.evidence["tail_share_mc"] = share_mc;
  v.evidence["tail_share_p"] = share_p;
  v.evidence["amplitude_ratio"] = amp_ratio;
  v.evidence["gradient_growth"] = grad_growth;
  v.evidence["spacetime_mc_norm"] = tr.spacetime_mc_norm;
  v.evidence["spacetime_p_norm"] = tr.spacetime_p_norm;

  if (tr.status == EvolveStatus::blowup_terminated) {
    v.outcome = Outcome::Blowup;
  } else if (tr.status == EvolveStatus::completed && share_mc < th.tail_share &&
             share_p < th.tail_share && amp_ratio < th.amp_ratio) {
    v.outcome = Outcome::Scatter;
  } else {
    v.outcome = Outcome::Undecided;
  }

  switch (membership.set) {
    case MembershipSet::A_plus: v.theory_consistent = (v.outcome == Outcome::Scatter); break;
    case MembershipSet::A_minus: v.theory_consistent = (v.outcome == Outcome::Blowup); break;
    default: v.theory_consistent = true;  // no prediction above threshold
  }
  return v;
}

// --------------------------------------------------------------------------
// Trapping monitors along a run.
// --------------------------------------------------------------------------

// A_minus orbits: K(u(t)) < -(m_omega - S_omega(u(t))) at every step.
// Returns the number of violating records.
inline long count_K_upper_bound_violations(const Trajectory& tr, double m_omega) {
  long bad = 0;
  for (const auto& rec : tr.series)
    if (!(rec.bundle.K < -(m_omega - rec.bundle.action))) ++bad;
  return bad;
}

// A_plus orbits: empirical delta for
//   K >= min(c_trap (grad + d/(d+2) Lmc), delta (m_omega - S_omega)).
// Returns the largest delta that holds along the whole run (clamped to
// delta_max), or 0 when some step has K below both expressions.
inline double calibrate_trapping_delta(const Trajectory& tr, double m_omega,
                                       const Params& params, double delta_max = 10.0) {
  double delta = delta_max;
  double c = trapping_constant(params);
  for (const auto& rec : tr.series) {
    double quad_part = c * (rec.bundle.K_quad +
                            params.d / (params.d + 2.0) * rec.bundle.L_mass_crit);
    if (rec.bundle.K >= quad_part) continue;
    double gap = m_omega - rec.bundle.action;
    if (!(gap > 0.0)) return 0.0;
    double required = rec.bundle.K / gap;
    if (required <= 0.0) return 0.0;
    delta = std::min(delta, required);
  }
  return delta;
}

inline long count_K_sign_violations(const Trajectory& tr, bool expect_nonnegative) {
  long bad = 0;
  for (const auto& rec : tr.series) {
    bool ok = expect_nonnegative ? (rec.bundle.K >= 0.0) : (rec.bundle.K < 0.0);
    if (!ok) ++bad;
  }
  return bad;
}

}  // namespace nls
