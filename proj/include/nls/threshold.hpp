#pragma once

// Threshold m_omega and variational set membership.
//
//   subcritical:      m_omega = S_omega(Q), Q from the shooting solver
//   energy-critical:  m_omega = E0(W), independent of omega
//
// Membership below threshold splits on the sign of K:
//   A_plus  = { S_omega(u) < m_omega, K(u) >= 0 }
//   A_minus = { S_omega(u) < m_omega, K(u) < 0 }
// The K = 0 boundary goes to A_plus (inclusive inequality); margin <= 0 is
// reported as above_threshold.

#include "nls/aubin_talenti.hpp"
#include "nls/groundstate.hpp"

namespace nls {

inline double threshold(const Params& params) {
  if (params.energy_critical()) return explicit_aubin_talenti(params.d).E0_of_W;
  return solve_ground_state(params).m_omega;
}

enum class MembershipSet { A_plus, A_minus, above_threshold };

inline const char* to_string(MembershipSet s) {
  switch (s) {
    case MembershipSet::A_plus: return "A_plus";
    case MembershipSet::A_minus: return "A_minus";
    default: return "above_threshold";
  }
}

struct MembershipVerdict {
  double S_omega_value = 0.0;
  double m_omega = 0.0;
  double K_value = 0.0;
  MembershipSet set = MembershipSet::above_threshold;
  double margin = 0.0;  // m_omega - S_omega(u0)
};

inline MembershipVerdict classify_data(const Field& u0, const Params& params,
                                       double m_omega) {
  FunctionalBundle b = evaluate(u0, params);
  MembershipVerdict v;
  v.S_omega_value = b.action;
  v.m_omega = m_omega;
  v.K_value = b.K;
  v.margin = m_omega - b.action;
  if (v.margin <= 0.0)
    v.set = MembershipSet::above_threshold;
  else
    v.set = (b.K >= 0.0) ? MembershipSet::A_plus : MembershipSet::A_minus;
  return v;
}

inline MembershipVerdict classify_data(const Field& u0, const Params& params) {
  return classify_data(u0, params, threshold(params));
}

}  // namespace nls
