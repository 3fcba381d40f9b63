#pragma once

// Time integration of i u_t + Delta u = |u|^(4/d) u - |u|^(p-1) u by Strang
// splitting. Both substeps are exact flows:
//   N(t): u -> u exp(-i t (|u|^(4/d) - |u|^(p-1)))   (modulus preserved)
//   L(t): u_hat(k) -> exp(-i |k|^2 t) u_hat(k)
// composed as N(dt/2) L(dt) N(dt/2). The scheme is second order, unitary in
// mass, and exactly time-reversible.
//
// Adaptive rule "gradient": dt = min(dt0, c / ||grad u||^2) with
// c = dt0 * ||grad u0||^2, which refines towards a collapse. Termination:
//   - t reached t_end                                    -> completed
//   - ||grad u|| > blowup_gradient_factor * ||grad u0||,
//     or the state went non-finite                       -> blowup_terminated
//   - dt fell below dt_floor without gradient blowup     -> step_floor_hit
//   - mass/energy drift exceeded drift_budget            -> drift_exceeded

#include "nls/functionals.hpp"
#include "nls/virial.hpp"

namespace nls {

enum class AdaptRule { fixed, gradient };

struct EvolveControls {
  double dt0 = 1e-3;
  double t_end = 1.0;
  double dt_floor = 1e-9;
  double blowup_gradient_factor = 1e4;
  AdaptRule adapt = AdaptRule::gradient;
  int snapshot_stride = 100;
  double drift_budget = 1e-6;
  bool dealias_23 = false;

  void validate() const {
    if (!(t_end > 0.0)) throw InvalidParameter("t_end must be positive");
    if (!(dt0 > dt_floor) || !(dt_floor > 0.0))
      throw InvalidParameter("need dt0 > dt_floor > 0");
    if (!(blowup_gradient_factor > 1.0))
      throw InvalidParameter("blowup_gradient_factor must exceed 1");
    if (snapshot_stride < 1) throw InvalidParameter("snapshot_stride must be >= 1");
    if (!(drift_budget > 0.0)) throw InvalidParameter("drift_budget must be positive");
  }
};

enum class EvolveStatus { completed, blowup_terminated, step_floor_hit, drift_exceeded };

inline const char* to_string(EvolveStatus s) {
  switch (s) {
    case EvolveStatus::completed: return "completed";
    case EvolveStatus::blowup_terminated: return "blowup_terminated";
    case EvolveStatus::step_floor_hit: return "step_floor_hit";
    default: return "drift_exceeded";
  }
}

struct StepRecord {
  double t = 0.0;
  double dt = 0.0;  // step that produced this state (0 for the initial one)
  FunctionalBundle bundle;
  std::array<double, 3> momentum = {0.0, 0.0, 0.0};
  double V = 0.0;    // virial values when a probe is attached
  double Vp = 0.0;
  double Vpp = 0.0;
  double cum_mc_norm = 0.0;  // int_0^t ||u||^{2(d+2)/d}_{2(d+2)/d} ds
  double cum_p_norm = 0.0;   // int_0^t ||u||^{q2}_{q2} ds, q2 = (d+2)(p-1)/2
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StepRecord> series;
  std::vector<Field> snapshots;
  std::vector<double> snapshot_times;
  EvolveStatus status = EvolveStatus::completed;
  double spacetime_mc_norm = 0.0;
  double spacetime_p_norm = 0.0;
  Field final_state;
};

inline void strang_substep_nonlinear(Field& u, double t, const Params& params) {
  const double fourth = 2.0 / params.d;        // |u|^{4/d} = (|u|^2)^{2/d}
  const double ppow = 0.5 * (params.p - 1.0);  // |u|^{p-1} = (|u|^2)^{(p-1)/2}
  for (auto& v : u.values) {
    double a2 = std::norm(v);
    if (a2 == 0.0) continue;
    double phase = -t * (std::pow(a2, fourth) - std::pow(a2, ppow));
    v *= std::polar(1.0, phase);
  }
}

inline Field strang_step(const Field& u, double dt, const Params& params,
                         const Transform& tf) {
  if (!(dt != 0.0)) throw InvalidParameter("strang_step requires dt != 0");
  Field v = u;
  v.tag = "evolved";
  strang_substep_nonlinear(v, 0.5 * dt, params);
  std::vector<Complex> uhat;
  tf.forward(v.values, uhat);
  const CartesianGrid& g = tf.grid();
  std::array<int, 3> ijk;
  std::array<double, 3> k;
  for (std::size_t idx = 0; idx < uhat.size(); ++idx) {
    g.unflatten(idx, ijk);
    g.wavevector(ijk, k);
    double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    uhat[idx] *= std::polar(1.0, -k2 * dt);
  }
  tf.inverse(uhat, v.values);
  strang_substep_nonlinear(v, 0.5 * dt, params);
  return v;
}

inline Field strang_step(const Field& u, double dt, const Params& params) {
  return strang_step(u, dt, params, *get_transform(u.cart_ptr()));
}

namespace detail {

inline void spectral_filter_23(std::vector<Complex>& uhat, const CartesianGrid& g) {
  std::array<int, 3> ijk;
  const int cut = g.points_per_axis() / 3;
  for (std::size_t idx = 0; idx < uhat.size(); ++idx) {
    g.unflatten(idx, ijk);
    for (int a = 0; a < g.dim(); ++a) {
      int m = ijk[a] < g.points_per_axis() / 2 ? ijk[a] : ijk[a] - g.points_per_axis();
      if (std::abs(m) > cut) {
        uhat[idx] = Complex(0.0, 0.0);
        break;
      }
    }
  }
}

}  // namespace detail

// |E|'s natural magnitude: the sum of the absolute values of its parts
inline double energy_magnitude_scale(const FunctionalBundle& b, const Params& params) {
  return 0.5 * b.K_quad + b.Lp1 / (params.p + 1.0) +
         params.d / (2.0 * (params.d + 2.0)) * b.L_mass_crit + 1e-300;
}

inline Trajectory evolve(const Field& u0, const Params& params,
                         const EvolveControls& controls,
                         const VirialProbe* probe = nullptr,
                         const std::function<void(const StepRecord&)>& sink = {}) {
  controls.validate();
  if (!u0.is_cartesian()) throw FieldError("evolve integrates cartesian fields");
  if (!u0.all_finite()) throw FieldError("initial data is not finite");

  auto tf = get_transform(u0.cart_ptr());
  Trajectory tr;
  tr.final_state = u0;

  Field u = u0;
  double t = 0.0;
  KahanSum cum_mc, cum_p;
  const double q2 = 0.5 * (params.d + 2) * (params.p - 1.0);

  auto record = [&](double dt_used) {
    StepRecord rec;
    rec.t = t;
    rec.dt = dt_used;
    rec.bundle = evaluate(u, params);
    SpectralField s = forward_transform(u);
    rec.momentum = momentum(s);
    if (probe) {
      auto vv = probe->evaluate(u, params);
      rec.V = vv.V;
      rec.Vp = vv.Vp;
      rec.Vpp = vv.Vpp;
    }
    rec.cum_mc_norm = cum_mc.value();
    rec.cum_p_norm = cum_p.value();
    tr.times.push_back(t);
    tr.series.push_back(rec);
    if (sink) sink(rec);
    return rec;
  };

  StepRecord first = record(0.0);
  const double mass0 = first.bundle.mass;
  const double energy0 = first.bundle.energy;
  // energy can sit near zero by cancellation; drift is judged against the
  // magnitude of its parts
  const double energy_scale = energy_magnitude_scale(first.bundle, params);
  const double grad0 = first.bundle.K_quad;
  const double c_adapt = controls.dt0 * std::max(grad0, 1e-300);
  tr.snapshots.push_back(u);
  tr.snapshot_times.push_back(0.0);

  long step_index = 0;
  tr.status = EvolveStatus::completed;
  const double t_eps = 1e-12 * controls.t_end;

  while (t < controls.t_end - t_eps) {
    double grad_now = tr.series.back().bundle.K_quad;
    double dt = controls.dt0;
    if (controls.adapt == AdaptRule::gradient && grad_now > 0.0)
      dt = std::min(controls.dt0, c_adapt / grad_now);
    if (dt < controls.dt_floor) {
      tr.status = EvolveStatus::step_floor_hit;
      break;
    }
    dt = std::min(dt, controls.t_end - t);

    Field next = strang_step(u, dt, params, *tf);
    if (controls.dealias_23) {
      std::vector<Complex> uhat;
      tf->forward(next.values, uhat);
      detail::spectral_filter_23(uhat, tf->grid());
      tf->inverse(uhat, next.values);
    }
    if (!next.all_finite()) {
      tr.status = EvolveStatus::blowup_terminated;
      break;  // terminal state is the last finite one
    }
    u = std::move(next);
    t += dt;
    ++step_index;

    double lmc = quadrature_Lq(u, params.mass_critical_power());
    cum_mc.add(dt * lmc);
    cum_p.add(dt * quadrature_Lq(u, q2));
    StepRecord rec = record(dt);

    if (step_index % controls.snapshot_stride == 0) {
      tr.snapshots.push_back(u);
      tr.snapshot_times.push_back(t);
    }

    if (std::sqrt(rec.bundle.K_quad) >
        controls.blowup_gradient_factor * std::sqrt(std::max(grad0, 0.0))) {
      tr.status = EvolveStatus::blowup_terminated;
      break;
    }
    double mass_drift = std::abs(rec.bundle.mass - mass0) / (std::abs(mass0) + 1e-300);
    double energy_drift = std::abs(rec.bundle.energy - energy0) / energy_scale;
    if (mass_drift > controls.drift_budget || energy_drift > controls.drift_budget) {
      tr.status = EvolveStatus::drift_exceeded;
      break;
    }
  }

  tr.spacetime_mc_norm = cum_mc.value();
  tr.spacetime_p_norm = cum_p.value();
  tr.final_state = u;
  if (tr.snapshot_times.back() != tr.times.back()) {
    tr.snapshots.push_back(u);
    tr.snapshot_times.push_back(tr.times.back());
  }
  return tr;
}

// --------------------------------------------------------------------------
// Conservation report: maximal relative drifts along a trajectory.
// --------------------------------------------------------------------------

struct ConservationReport {
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  double action_drift = 0.0;
  double momentum_drift = 0.0;  // absolute, max over components and time
};

inline ConservationReport conservation_report(const Trajectory& tr, const Params& params) {
  if (tr.series.empty()) throw InvalidParameter("conservation report needs a trajectory");
  ConservationReport rep;
  const auto& first = tr.series.front();
  const double e_scale = energy_magnitude_scale(first.bundle, params);
  const double s_scale = e_scale + 0.5 * params.omega * first.bundle.mass;
  for (const auto& rec : tr.series) {
    rep.mass_drift = std::max(rep.mass_drift,
                              std::abs(rec.bundle.mass - first.bundle.mass) /
                                  (std::abs(first.bundle.mass) + 1e-300));
    rep.energy_drift = std::max(
        rep.energy_drift, std::abs(rec.bundle.energy - first.bundle.energy) / e_scale);
    rep.action_drift = std::max(
        rep.action_drift, std::abs(rec.bundle.action - first.bundle.action) / s_scale);
    for (int a = 0; a < 3; ++a)
      rep.momentum_drift =
          std::max(rep.momentum_drift, std::abs(rec.momentum[a] - first.momentum[a]));
  }
  return rep;
}

}  // namespace nls
