#pragma once

// Ground-state solver: radial shooting for
//   Q'' + (d-1)/r Q' - omega Q + Q^p - Q^(1+4/d) = 0,  Q'(0) = 0, Q -> 0,
// the positive decreasing solution.
//
// Bisection on Q(0) between undershoot (Q' turns up while Q > 0) and
// overshoot (Q crosses zero), driven to a few ulp. The profile is then
// assembled from two stable sweeps: a forward pass from the series start at
// r = 0 down to where Q ~ 1e-2 Q(0), and a backward pass of the full ODE
// from r_max seeded with the decaying linearized solution
// c r^(1-d/2) K_{d/2-1}(sqrt(omega) r), with c tuned by secant so the two
// sweeps meet. Backward integration is stable for the decaying branch, so
// the tail is clean all the way to r_max.

#include <fstream>
#include <limits>
#include <sstream>

#include "nls/functionals.hpp"

namespace nls {

struct GroundState {
  Field profile;          // radial, real-valued samples of Q
  int d = 1;
  double p = 0.0;
  double omega = 0.0;
  double m_omega = 0.0;   // S_omega(Q)
  double Q0 = 0.0;        // Q(0)
  double K_of_Q = 0.0;
  double residual_sup = 0.0;
  double decay_rate = 0.0;
};

namespace detail {

// signed powers so overshoot excursions below zero stay well-defined
inline double signed_pow(double q, double expo) {
  if (q == 0.0) return 0.0;
  double a = std::pow(std::abs(q), expo);
  return q > 0.0 ? a : -a;
}

struct GroundStateOde {
  int d;
  double p;
  double omega;
  double mass_crit_expo;  // 1 + 4/d

  void rhs(double r, const double y[2], double dy[2]) const {
    dy[0] = y[1];
    double friction = (d > 1 && r != 0.0) ? (d - 1) * y[1] / r : 0.0;
    dy[1] = omega * y[0] + signed_pow(y[0], mass_crit_expo) - signed_pow(y[0], p) - friction;
  }
};

// Dormand-Prince 5(4). Handles both integration directions.
struct Dopri5 {
  double rtol = 1e-13;
  double atol = 1e-260;

  // One error-controlled macro step from r to exactly r_target; calls
  // `after` with (r_prev, y_prev, r_new, y_new) after every accepted step.
  template <class AfterStep>
  bool integrate_to(const GroundStateOde& ode, double& r, double y[2], double r_target,
                    AfterStep&& after) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double dir = (r_target >= r) ? 1.0 : -1.0;
    double h = dir * std::min(std::abs(r_target - r), 0.1);
    if (r == r_target) return true;
    double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2];
    ode.rhs(r, y, k1);
    while (dir * (r_target - r) > 0.0) {
      if (dir * (r + h) > dir * r_target) h = r_target - r;
      if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(r))) return false;

      yt[0] = y[0] + h * a21 * k1[0];
      yt[1] = y[1] + h * a21 * k1[1];
      ode.rhs(r + c2 * h, yt, k2);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      ode.rhs(r + c3 * h, yt, k3);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ode.rhs(r + c4 * h, yt, k4);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ode.rhs(r + c5 * h, yt, k5);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
      ode.rhs(r + h, yt, k6);
      double y5[2];
      for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      ode.rhs(r + h, y5, k7);

      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                         e7 * k7[i]);
        double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(ei) / sc);
      }
      if (err <= 1.0) {
        double r_prev = r;
        double y_prev[2] = {y[0], y[1]};
        r += h;
        y[0] = y5[0];
        y[1] = y5[1];
        k1[0] = k7[0];  // FSAL
        k1[1] = k7[1];
        if (!after(r_prev, y_prev, r, y)) return true;
      }
      double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(fac, 0.2, 5.0);
    }
    return true;
  }

  bool integrate_to(const GroundStateOde& ode, double& r, double y[2], double r_target) const {
    return integrate_to(ode, r, y, r_target,
                        [](double, const double*, double, const double*) { return true; });
  }

  // one fixed step, no error control. The node-sampling sweeps use fixed
  // substeps: adaptive step-size jitter between adjacent nodes would get
  // amplified by 1/h^2 in the finite-difference residual check, while the
  // fixed-step truncation error is a smooth function of r that the
  // residual operator barely sees.
  void step_fixed(const GroundStateOde& ode, double& r, double y[2], double h) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], yt[2];
    ode.rhs(r, y, k1);
    yt[0] = y[0] + h * a21 * k1[0];
    yt[1] = y[1] + h * a21 * k1[1];
    ode.rhs(r + c2 * h, yt, k2);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    ode.rhs(r + c3 * h, yt, k3);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    ode.rhs(r + c4 * h, yt, k4);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    ode.rhs(r + c5 * h, yt, k5);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    ode.rhs(r + h, yt, k6);
    for (int i = 0; i < 2; ++i)
      y[i] += h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    r += h;
  }

  void sample_to(const GroundStateOde& ode, double& r, double y[2], double r_target,
                 int substeps = 4) const {
    double h = (r_target - r) / substeps;
    for (int k = 0; k < substeps - 1; ++k) step_fixed(ode, r, y, h);
    step_fixed(ode, r, y, r_target - r);  // land exactly
  }
};

// Even Taylor series about the regular singular point r = 0, through r^6:
//   Q = q0 + q2 r^2 + q4 r^4 + q6 r^6,  f(q) = omega q + q^(1+4/d) - q^p,
//   2d q2 = f(q0),  4(d+2) q4 = f'(q0) q2,
//   6(d+4) q6 = f'(q0) q4 + (1/2) f''(q0) q2^2.
inline void series_eval(const GroundStateOde& ode, double q0, double r, double y[2]) {
  double mc = ode.mass_crit_expo;
  double f = ode.omega * q0 + signed_pow(q0, mc) - signed_pow(q0, ode.p);
  double fp = ode.omega + mc * signed_pow(q0, mc - 1.0) - ode.p * signed_pow(q0, ode.p - 1.0);
  double fpp = mc * (mc - 1.0) * signed_pow(q0, mc - 2.0) -
               ode.p * (ode.p - 1.0) * signed_pow(q0, ode.p - 2.0);
  double q2 = f / (2.0 * ode.d);
  double q4 = fp * q2 / (4.0 * (ode.d + 2.0));
  double q6 = (fp * q4 + 0.5 * fpp * q2 * q2) / (6.0 * (ode.d + 4.0));
  double r2 = r * r;
  y[0] = q0 + r2 * (q2 + r2 * (q4 + r2 * q6));
  y[1] = r * (2.0 * q2 + r2 * (4.0 * q4 + r2 * 6.0 * q6));
}

inline void series_start(const GroundStateOde& ode, double q0, double& r, double y[2]) {
  r = 1e-5;
  series_eval(ode, q0, r, y);
}

}  // namespace detail

enum class ShotOutcome { overshoot, undershoot, decayed };

struct ShotEvent {
  ShotOutcome outcome = ShotOutcome::decayed;
  double radius = 0.0;  // first sign-change radius (linear estimate in-step)
};

// Classify a single shot with free adaptive stepping. Exposed for the
// shooting-monotonicity checks.
inline ShotEvent shoot_probe(const Params& params, double q0, double r_end) {
  detail::GroundStateOde ode{params.d, params.p, params.omega, 1.0 + 4.0 / params.d};
  detail::Dopri5 stepper;
  double r, y[2];
  detail::series_start(ode, q0, r, y);
  ShotEvent ev;
  ev.radius = r_end;
  bool done = false;
  stepper.integrate_to(ode, r, y, r_end,
                       [&](double r0, const double* y0, double r1, const double* y1) {
                         if (y1[0] <= 0.0) {
                           ev.outcome = ShotOutcome::overshoot;
                           double f = y0[0] / (y0[0] - y1[0]);
                           ev.radius = r0 + f * (r1 - r0);
                           done = true;
                           return false;
                         }
                         if (y1[1] > 0.0) {
                           ev.outcome = ShotOutcome::undershoot;
                           double f = (y0[1] != y1[1]) ? -y0[1] / (y1[1] - y0[1]) : 1.0;
                           ev.radius = r0 + f * (r1 - r0);
                           done = true;
                           return false;
                         }
                         return true;
                       });
  if (!done) ev.outcome = ShotOutcome::decayed;
  return ev;
}

inline double default_r_max(double omega) { return 40.0 / std::sqrt(omega); }

inline RadialGridPtr default_ground_state_grid(const Params& params) {
  return RadialGrid::create(params.d, 32768, default_r_max(params.omega));
}

namespace detail {

// decaying solution of psi'' + (d-1)/r psi' = omega psi, and its derivative
inline double linear_tail(int d, double omega, double r) {
  double s = std::sqrt(omega);
  switch (d) {
    case 1: return std::exp(-s * r);
    case 2: return std::cyl_bessel_k(0.0, s * r);
    case 3: return std::exp(-s * r) / r;
    default: throw InvalidParameter("unsupported dimension");
  }
}

inline double linear_tail_deriv(int d, double omega, double r) {
  double s = std::sqrt(omega);
  switch (d) {
    case 1: return -s * std::exp(-s * r);
    case 2: return -s * std::cyl_bessel_k(1.0, s * r);
    case 3: return -(s / r + 1.0 / (r * r)) * std::exp(-s * r);
    default: throw InvalidParameter("unsupported dimension");
  }
}

// forward pass: fill samples[0 .. i_stop + extra] where i_stop is the first
// node with Q below `switch_frac * q0`; the overrun supplies the blending
// window against the backward sweep
inline int forward_sample(const GroundStateOde& ode, double q0, const RadialGrid& grid,
                          double switch_frac, int extra, std::vector<double>& samples) {
  Dopri5 stepper;
  const auto& nodes = grid.nodes();
  const double h = grid.spacing();
  samples.assign(grid.size(), 0.0);
  samples[0] = q0;
  double r, y[2];
  // land on the first node without integrating across the near-axis
  // stiffness: series when the node is inside the series' accuracy radius,
  // one adaptive hop otherwise (the value kink that leaves is O(h^2)-benign
  // on coarse grids)
  if (h <= 8e-3) {
    r = h;
    series_eval(ode, q0, r, y);
  } else {
    series_start(ode, q0, r, y);
    if (!stepper.integrate_to(ode, r, y, nodes[1]))
      throw SolverError("ground-state integrator step underflow");
  }
  samples[1] = y[0];
  const double thresh = switch_frac * q0;
  int i_stop = -1;
  for (int i = 2; i < grid.n_nodes(); ++i) {
    stepper.sample_to(ode, r, y, nodes[i]);
    samples[i] = y[0];
    if (i_stop < 0) {
      if (y[0] <= 0.0 || y[1] > 0.0)
        throw SolverError("converged shot left the decaying branch early");
      if (y[0] < thresh) i_stop = i;
    } else if (i >= i_stop + extra) {
      return i_stop;
    }
  }
  return i_stop < 0 ? grid.n_nodes() - 1 : i_stop;
}

// backward pass from r_max seeded with c * linear tail; fills
// samples[i_from .. n-1] and returns Q_back at nodes[i_from]
inline double backward_sample(const GroundStateOde& ode, double c, const RadialGrid& grid,
                              int i_from, std::vector<double>& samples) {
  Dopri5 stepper;
  const auto& nodes = grid.nodes();
  const int n = grid.n_nodes();
  double r = nodes[n - 1];
  double y[2] = {c * linear_tail(ode.d, ode.omega, r),
                 c * linear_tail_deriv(ode.d, ode.omega, r)};
  samples[n - 1] = y[0];
  for (int i = n - 2; i >= i_from; --i) {
    stepper.sample_to(ode, r, y, nodes[i]);
    samples[i] = y[0];
  }
  return samples[i_from];
}

// sup-norm of the ODE residual by 6th-order finite differences with even
// extension across r = 0; the last few nodes are skipped (Q ~ 1e-17 there
// and one-sided closures add nothing). Sixth order because the profile's
// high derivatives near the axis grow fast with Q(0).
inline double ode_residual_sup(const std::vector<double>& q, const RadialGrid& grid,
                               const GroundStateOde& ode) {
  const double h = grid.spacing();
  const int n = grid.n_nodes();
  auto at = [&](int i) { return q[i < 0 ? -i : i]; };
  double sup = 0.0;
  for (int i = 0; i <= n - 4; ++i) {
    double d1 = (-at(i - 3) + 9.0 * at(i - 2) - 45.0 * at(i - 1) + 45.0 * at(i + 1) -
                 9.0 * at(i + 2) + at(i + 3)) / (60.0 * h);
    double d2 = (2.0 * at(i - 3) - 27.0 * at(i - 2) + 270.0 * at(i - 1) - 490.0 * at(i) +
                 270.0 * at(i + 1) - 27.0 * at(i + 2) + 2.0 * at(i + 3)) /
                (180.0 * h * h);
    double lap = (i == 0) ? ode.d * d2 : d2 + (ode.d - 1) * d1 / grid.nodes()[i];
    double res = lap - ode.omega * at(i) + signed_pow(at(i), ode.p) -
                 signed_pow(at(i), ode.mass_crit_expo);
    sup = std::max(sup, std::abs(res));
  }
  return sup;
}

// log-linear fit of the decay rate over the last decade of Q above the
// tail floor
inline double fit_decay_rate(const std::vector<double>& q, const RadialGrid& grid) {
  const int n = grid.n_nodes();
  double q_end = q[n - 1];
  if (!(q_end > 0.0)) throw SolverError("tail not positive, cannot fit decay rate");
  double lo = q_end, hi = 10.0 * q_end;
  KahanSum sx, sy, sxx, sxy;
  long count = 0;
  for (int i = 0; i < n; ++i) {
    if (q[i] < lo || q[i] > hi) continue;
    double x = grid.nodes()[i], y = std::log(q[i]);
    sx.add(x);
    sy.add(y);
    sxx.add(x * x);
    sxy.add(x * y);
    ++count;
  }
  if (count < 8) throw SolverError("decay-rate fit window too small");
  double det = count * sxx.value() - sx.value() * sx.value();
  double slope = (count * sxy.value() - sx.value() * sy.value()) / det;
  return -slope;
}

}  // namespace detail

inline GroundState solve_ground_state(const Params& params, RadialGridPtr grid) {
  if (params.energy_critical())
    throw InvalidParameter("energy-critical regime: use the explicit extremal profile");
  detail::GroundStateOde ode{params.d, params.p, params.omega, 1.0 + 4.0 / params.d};
  const double r_end = grid->r_max();

  // overshoot requires positive shooting "potential" at rest
  auto potential = [&](double s) {
    return std::pow(s, params.p + 1.0) / (params.p + 1.0) -
           std::pow(s, ode.mass_crit_expo + 1.0) / (ode.mass_crit_expo + 1.0) -
           0.5 * params.omega * s * s;
  };
  double s_pos = 1.0;
  while (potential(s_pos) <= 0.0) {
    s_pos *= 2.0;
    if (s_pos > 1e8) throw SolverError("no positive-energy amplitude found");
  }
  {
    double lo = s_pos / 2.0, hi = s_pos;
    while (hi - lo > 1e-13 * hi) {
      double mid = 0.5 * (lo + hi);
      (potential(mid) <= 0.0 ? lo : hi) = mid;
    }
    s_pos = hi;
  }

  double s_lo = s_pos, s_hi = 0.0;
  double s = 1.001 * s_pos;
  for (int it = 0; it < 200; ++it) {
    if (shoot_probe(params, s, r_end).outcome == ShotOutcome::overshoot) {
      s_hi = s;
      break;
    }
    s_lo = s;
    s *= 1.25;
    if (s > 1e8) throw SolverError("shooting bracket not found");
  }
  if (s_hi == 0.0) throw SolverError("shooting bracket not found");

  // bisect to a few ulp; contamination of the forward sweep scales with
  // this width times an exponential of the switch radius
  while (s_hi - s_lo > 8.0 * std::numeric_limits<double>::epsilon() * s_hi) {
    double mid = 0.5 * (s_lo + s_hi);
    (shoot_probe(params, mid, r_end).outcome == ShotOutcome::overshoot ? s_hi : s_lo) = mid;
  }
  double s_star = 0.5 * (s_lo + s_hi);

  // assemble: forward sweep to Q ~ 1e-2 Q0, backward sweep for the tail.
  // The branches are blended over a window; a point splice would leave a
  // derivative kink of the size of the forward sweep's amplified error,
  // which the finite-difference residual picks up.
  std::vector<double> q;
  const int blend_half = std::max(4, grid->n_nodes() / 64);
  int i_switch = detail::forward_sample(ode, s_star, *grid, 1e-2, blend_half, q);
  int i_lo = std::max(1, i_switch - blend_half);
  int i_hi = std::min(grid->n_nodes() - 2, i_switch + blend_half);
  double target = q[i_switch];
  std::vector<double> q_back(grid->size(), 0.0);
  double c0 = target / detail::linear_tail(params.d, params.omega, grid->nodes()[i_switch]);
  detail::backward_sample(ode, c0, *grid, i_lo, q_back);
  double m0 = q_back[i_switch] - target;
  double c1 = c0 * target / q_back[i_switch];
  for (int it = 0; it < 8; ++it) {
    detail::backward_sample(ode, c1, *grid, i_lo, q_back);
    double m1 = q_back[i_switch] - target;
    if (std::abs(m1) <= 1e-14 * std::abs(target)) break;
    double dc = (m1 - m0) != 0.0 ? m1 * (c1 - c0) / (m1 - m0) : 0.0;
    c0 = c1;
    m0 = m1;
    c1 -= dc;
  }
  for (int i = i_lo; i <= i_hi; ++i) {
    double t = double(i - i_lo) / double(i_hi - i_lo);
    double sigma = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));  // quintic smoothstep
    q[i] = (1.0 - sigma) * q[i] + sigma * q_back[i];
  }
  for (int i = i_hi + 1; i < grid->n_nodes(); ++i) q[i] = q_back[i];

  for (int i = 0; i + 1 < grid->n_nodes(); ++i)
    if (!(q[i] > 0.0) || q[i + 1] > q[i] * (1.0 + 1e-12))
      throw SolverError("shooting produced a non-monotone candidate (excited state)");

  GroundState gs;
  gs.profile.grid = grid;
  gs.profile.tag = "ground_state";
  gs.profile.values.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) gs.profile.values[i] = Complex(q[i], 0.0);
  gs.d = params.d;
  gs.p = params.p;
  gs.omega = params.omega;
  gs.Q0 = s_star;
  gs.residual_sup = detail::ode_residual_sup(q, *grid, ode);
  gs.decay_rate = detail::fit_decay_rate(q, *grid);
  FunctionalBundle b = evaluate(gs.profile, params);
  gs.m_omega = b.action;
  gs.K_of_Q = b.K;
  return gs;
}

inline GroundState solve_ground_state(const Params& params) {
  return solve_ground_state(params, default_ground_state_grid(params));
}

// --------------------------------------------------------------------------
// Columnar profile serialization. Header keys are fixed; rows are
// "r, Q(r)" with 17 significant digits (lossless double round trip).
// --------------------------------------------------------------------------

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

}  // namespace detail

inline void write_profile(std::ostream& os, const GroundState& gs) {
  os << "# nls-profile v1\n";
  os << "# d " << gs.d << "\n";
  os << "# p " << detail::fmt17(gs.p) << "\n";
  os << "# omega " << detail::fmt17(gs.omega) << "\n";
  os << "# m_omega " << detail::fmt17(gs.m_omega) << "\n";
  os << "# Q0 " << detail::fmt17(gs.Q0) << "\n";
  os << "# residual_sup " << detail::fmt17(gs.residual_sup) << "\n";
  const RadialGrid& g = gs.profile.rad();
  for (int i = 0; i < g.n_nodes(); ++i)
    os << detail::fmt17(g.nodes()[i]) << ", "
       << detail::fmt17(gs.profile.values[i].real()) << "\n";
}

inline void write_profile(const std::string& path, const GroundState& gs) {
  std::ofstream os(path);
  if (!os) throw SolverError("cannot open profile file for writing: " + path);
  write_profile(os, gs);
}

inline GroundState read_profile(std::istream& is) {
  GroundState gs;
  std::string line;
  std::vector<double> r, q;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "d") ls >> gs.d;
      else if (key == "p") ls >> gs.p;
      else if (key == "omega") ls >> gs.omega;
      else if (key == "m_omega") ls >> gs.m_omega;
      else if (key == "Q0") ls >> gs.Q0;
      else if (key == "residual_sup") ls >> gs.residual_sup;
      continue;
    }
    std::istringstream ls(line);
    double rv, qv;
    char comma;
    if (ls >> rv >> comma >> qv) {
      r.push_back(rv);
      q.push_back(qv);
    }
  }
  if (r.size() < 16) throw SolverError("profile file too short");
  auto grid = RadialGrid::create(gs.d, static_cast<int>(r.size()), r.back());
  gs.profile.grid = grid;
  gs.profile.tag = "ground_state(file)";
  gs.profile.values.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) gs.profile.values[i] = Complex(q[i], 0.0);
  return gs;
}

inline GroundState read_profile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SolverError("cannot open profile file: " + path);
  return read_profile(is);
}

}  // namespace nls
