#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace nls;
using Catch::Approx;

TEST_CASE("cutoff profiles satisfy their defining properties", "[diagnostics]") {
  // scattering: rho^2 core, vanishing beyond 2; blowup: phi'' <= 2, constant
  // beyond 3. Scan densely.
  const double flat = cutoff_profile(CutoffKind::blowup, 0, 3.5);
  for (double rho = 0.0; rho <= 4.0; rho += 1e-3) {
    double ps = cutoff_profile(CutoffKind::scattering, 0, rho);
    if (rho <= 1.0) CHECK(ps == Approx(rho * rho).margin(1e-15));
    if (rho >= 2.0) CHECK(ps == 0.0);
    CHECK(ps >= 0.0);
    CHECK(ps <= 1.55);  // overshoots 1 across the blend (peak ~1.52), by design

    double pb2 = cutoff_profile(CutoffKind::blowup, 2, rho);
    CHECK(pb2 <= 2.0 + 1e-12);
    if (rho >= 3.0) {
      CHECK(cutoff_profile(CutoffKind::blowup, 0, rho) == Approx(flat));
      CHECK(cutoff_profile(CutoffKind::blowup, 1, rho) == 0.0);
    }
    if (rho <= 1.0) CHECK(cutoff_profile(CutoffKind::blowup, 0, rho) == Approx(rho * rho).margin(1e-15));
  }
  // C^2 continuity of the blowup weight at the outer junction
  CHECK(cutoff_profile(CutoffKind::blowup, 1, 3.0 - 1e-9) == Approx(0.0).margin(1e-7));
  CHECK(cutoff_profile(CutoffKind::blowup, 2, 3.0 - 1e-9) == Approx(0.0).margin(1e-7));
  CHECK(cutoff_profile(CutoffKind::blowup, 0, 3.0 - 1e-9) == Approx(flat).margin(1e-8));
}

TEST_CASE("cutoff derivatives are consistent (FD cross-check)", "[diagnostics]") {
  const double h = 1e-5;
  for (auto kind : {CutoffKind::scattering, CutoffKind::blowup}) {
    for (int deriv = 0; deriv < 4; ++deriv) {
      double worst = 0.0;
      for (double rho = 0.05; rho <= 3.6; rho += 0.01) {
        // stay clear of the junctions: the scan is about the polynomial
        // pieces, the weight is only C^4 across them
        bool near_junction = false;
        for (double j : {1.0, 2.0, 3.0})
          if (std::abs(rho - j) < 64.0 * h) near_junction = true;
        if (near_junction) continue;
        double fd = (cutoff_profile(kind, deriv, rho + h) -
                     cutoff_profile(kind, deriv, rho - h)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - cutoff_profile(kind, deriv + 1, rho)));
      }
      CHECK(worst < 1e-4);  // central-difference floor, not a smoothness gap
    }
  }
}

TEST_CASE("sampled weight equals |x|^2 structure inside R", "[diagnostics]") {
  auto g = CartesianGrid::create(2, 64, 6.0);
  CutoffWeight w = make_cutoff(CutoffKind::scattering, 3.0, GridRef(g));
  std::array<int, 3> ijk;
  std::array<double, 3> x;
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    g->unflatten(idx, ijk);
    g->point(ijk, x);
    double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 < 9.0) {
      CHECK(w.phi_R[idx] == Approx(r2).margin(1e-12));
      CHECK(w.lap[idx] == Approx(4.0));  // 2d
      CHECK(w.bilap[idx] == 0.0);
      CHECK(w.hess[CutoffWeight::hess_index(0, 0)][idx] == Approx(2.0));
      CHECK(w.hess[CutoffWeight::hess_index(0, 1)][idx] == Approx(0.0).margin(1e-12));
    }
    if (r2 > 36.0 + 1e-9) CHECK(w.phi_R[idx] == 0.0);
  }
}

TEST_CASE("virial of gaussian matches the closed-form moment", "[diagnostics]") {
  auto g = CartesianGrid::create(1, 1024, 12.0);
  CutoffWeight w = make_cutoff(CutoffKind::scattering, 8.0, GridRef(g));
  CHECK(virial(make_zero(g), w) == 0.0);

  Field gauss = make_cartesian(g, [](const std::array<double, 3>& x) {
    return Complex(std::exp(-x[0] * x[0]), 0.0);
  });
  // int x^2 e^{-2x^2} = (1/4) sqrt(pi/2); the gaussian sits far inside R=8
  CHECK(virial(gauss, w) == Approx(oracles::gaussian_second_moment_1d()).epsilon(1e-10));

  Field twice = gauss;
  for (auto& v : twice.values) v *= 2.0;
  CHECK(virial(twice, w) == Approx(4.0 * virial(gauss, w)).epsilon(1e-12));

  auto other = CartesianGrid::create(1, 512, 12.0);
  CHECK_THROWS_AS(virial(make_zero(other), w), FieldError);
}

TEST_CASE("Vp vanishes for real fields; Vpp = 8K on interior support", "[diagnostics]") {
  Params params = Params::make(2, 5.0, 1.0);
  auto g = CartesianGrid::create(2, 256, 16.0);
  Field gauss = make_cartesian(g, [](const std::array<double, 3>& x) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    return Complex(0.9 * std::exp(-r2 / 2.0), 0.0);
  });
  for (auto kind : {CutoffKind::scattering, CutoffKind::blowup}) {
    CutoffWeight w = make_cutoff(kind, 8.0, GridRef(g));
    auto dv = virial_derivatives(gauss, w, params);
    CHECK(std::abs(dv.Vp) < 1e-12);
    double K = evaluate(gauss, params).K;
    CHECK(dv.Vpp == Approx(8.0 * K).epsilon(1e-8));
  }

  // an off-center packet with a velocity phase has nonzero Vp
  // (a centered one does not: the integrand is odd)
  Field moving = make_cartesian(g, [](const std::array<double, 3>& x) {
    double r2 = (x[0] - 2.0) * (x[0] - 2.0) + x[1] * x[1];
    return std::polar(0.9 * std::exp(-r2 / 2.0), 0.7 * x[0]);
  });
  CutoffWeight w = make_cutoff(CutoffKind::scattering, 8.0, GridRef(g));
  auto dv = virial_derivatives(moving, w, params);
  CHECK(std::abs(dv.Vp) > 1e-3);
}

TEST_CASE("radial virial agrees with the cartesian route", "[diagnostics]") {
  Params params = Params::make(2, 5.0, 1.0);
  auto profile = [](double r) { return 0.8 * std::exp(-r * r / 2.0); };
  auto rg = RadialGrid::create(2, 4096, 16.0);
  Field ur = make_radial(rg, [&](double r) { return Complex(profile(r), 0.0); });
  auto cg = CartesianGrid::create(2, 256, 16.0);
  Field uc = make_cartesian(cg, [&](const std::array<double, 3>& x) {
    return Complex(profile(std::hypot(x[0], x[1])), 0.0);
  });
  CutoffWeight wr = make_cutoff(CutoffKind::blowup, 4.0, GridRef(rg));
  CutoffWeight wc = make_cutoff(CutoffKind::blowup, 4.0, GridRef(cg));
  CHECK(virial(ur, wr) == Approx(virial(uc, wc)).epsilon(1e-6));
  auto dr = virial_derivatives(ur, wr, params);
  auto dc = virial_derivatives(uc, wc, params);
  CHECK(dr.Vpp == Approx(dc.Vpp).epsilon(1e-6));
}

TEST_CASE("|Vp| obeys the Cauchy-Schwarz bound along a run", "[diagnostics]") {
  Params params = Params::make(1, 7.0, 1.0);
  auto g = CartesianGrid::create(1, 512, 20.0);
  Field u0 = make_cartesian(g, [](const std::array<double, 3>& x) {
    return std::polar(0.5 * std::exp(-x[0] * x[0] / 2.0), 0.9 * x[0]);
  });
  const double R = 5.0;
  CutoffWeight w = make_cutoff(CutoffKind::scattering, R, GridRef(g));
  // sup |phi'| over the scattering profile (attained just past rho = 1)
  double sup_dphi = 0.0;
  for (double rho = 0.0; rho <= 2.0; rho += 1e-4)
    sup_dphi = std::max(sup_dphi, std::abs(cutoff_profile(CutoffKind::scattering, 1, rho)));

  EvolveControls c;
  c.dt0 = 2e-3;
  c.t_end = 0.5;
  c.dt_floor = 1e-9;
  c.adapt = AdaptRule::fixed;
  c.snapshot_stride = 100000;
  c.drift_budget = 1e-2;
  VirialProbe probe{w};
  Trajectory tr = evolve(u0, params, c, &probe);
  for (const auto& rec : tr.series) {
    if (rec.dt == 0.0) continue;
    double bound = 2.0 * R * sup_dphi *
                   std::sqrt(rec.bundle.mass * rec.bundle.K_quad);
    CHECK(std::abs(rec.Vp) <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("virial identity along a resolved d=2 run", "[diagnostics]") {
  Params params = Params::make(2, 5.0, 1.0);
  auto g = CartesianGrid::create(2, 128, 12.0);
  Field u0 = make_cartesian(g, [](const std::array<double, 3>& x) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    return Complex(0.5 * std::exp(-r2 / 2.0), 0.0);
  });
  EvolveControls c;
  c.dt0 = 2e-3;
  c.t_end = 0.4;
  c.dt_floor = 1e-9;
  c.adapt = AdaptRule::fixed;
  c.snapshot_stride = 100000;
  c.drift_budget = 1e-2;
  VirialProbe probe{make_cutoff(CutoffKind::scattering, 6.0, GridRef(g))};
  Trajectory tr = evolve(u0, params, c, &probe);
  REQUIRE(tr.status == EvolveStatus::completed);
  auto rep = virial_identity_check(tr);
  CHECK(rep.max_second_residual < 1e-3);
  CHECK(rep.max_first_residual < 1e-3);

  Trajectory stub;
  stub.series.resize(3);
  CHECK_THROWS_AS(virial_identity_check(stub), InvalidParameter);
}

TEST_CASE("stationary ground-state orbit has flat virial", "[diagnostics]") {
  // e^{i omega t} Q: |u| static, so V is constant, Vp ~ 0, Vpp ~ 8K(Q) ~ 0
  Params params = Params::make(1, 7.0, 1.0);
  auto gs = ground_state_cache().get(params);
  auto g = CartesianGrid::create(1, 1024, 30.0);
  Field u0 = cartesian_from_radial(gs->profile, g);
  EvolveControls c;
  c.dt0 = 2.5e-4;  // the splitting residue is what moves V here; keep it small
  c.t_end = 0.5;
  c.dt_floor = 1e-9;
  c.adapt = AdaptRule::fixed;
  c.snapshot_stride = 100000;
  c.drift_budget = 1e-2;
  VirialProbe probe{make_cutoff(CutoffKind::scattering, 10.0, GridRef(g))};
  Trajectory tr = evolve(u0, params, c, &probe);
  double V0 = tr.series.front().V;
  double scale = evaluate(u0, params).K_quad;
  // the embedded profile is stationary only up to the interpolation floor;
  // a dispersing pulse of this size would move V by O(1) on this horizon
  for (const auto& rec : tr.series) {
    CHECK(std::abs(rec.V - V0) / V0 < 5e-5);
    CHECK(std::abs(rec.Vp) < 1e-4 * scale);
    CHECK(std::abs(rec.Vpp) < 1e-3 * scale);
  }
}

TEST_CASE("radial Sobolev inequalities hold with bounded constants", "[diagnostics]") {
  Params params = Params::make(2, 5.0, 1.0);
  auto rg = RadialGrid::create(2, 8192, 40.0);

  // supported inside R: both sides vanish
  Field inside = make_radial(rg, [](double r) {
    return Complex(r < 1.5 ? std::exp(-1.0 / (1.0 - r * r / 2.25)) : 0.0, 0.0);
  });
  auto rep0 = radial_sobolev_check(inside, 4.0, params);
  CHECK(rep0.lhs_p == 0.0);
  CHECK(rep0.implied_const_p == 0.0);

  Field gauss = make_radial(rg, [](double r) { return Complex(std::exp(-r * r / 8.0), 0.0); });
  for (double R : {2.0, 4.0, 8.0}) {
    auto rep = radial_sobolev_check(gauss, R, params);
    CHECK(rep.implied_const_p > 0.0);
    CHECK(rep.implied_const_p <= rep.bound_p * (1.0 + 1e-9));
    CHECK(rep.implied_const_mc <= rep.bound_mc * (1.0 + 1e-9));

    // amplitude scaling cancels exactly in the implied constant
    Field big = gauss;
    for (auto& v : big.values) v *= 2.0;
    auto rep2 = radial_sobolev_check(big, R, params);
    CHECK(rep2.implied_const_p == Approx(rep.implied_const_p).epsilon(1e-12));
    CHECK(rep2.implied_const_mc == Approx(rep.implied_const_mc).epsilon(1e-12));
  }

  auto cg = CartesianGrid::create(2, 64, 10.0);
  CHECK_THROWS_AS(radial_sobolev_check(make_zero(cg), 2.0, params), FieldError);
  Params d1 = Params::make(1, 7.0, 1.0);
  auto rg1 = RadialGrid::create(1, 1024, 10.0);
  CHECK_THROWS_AS(radial_sobolev_check(make_zero(rg1), 2.0, d1), InvalidParameter);
}

TEST_CASE("outcome classification: undecided fall-through", "[diagnostics]") {
  // an A_plus run cut short: completed but nothing has decayed yet
  Params params = Params::make(1, 7.0, 1.0);
  auto gs = ground_state_cache().get(params);
  auto g = CartesianGrid::create(1, 512, 25.0);
  Field u0 = cartesian_from_radial(gs->profile, g, 1.0, 0.3);
  EvolveControls c;
  c.dt0 = 2e-3;
  c.t_end = 0.5;
  c.dt_floor = 1e-9;
  c.adapt = AdaptRule::fixed;
  c.snapshot_stride = 100000;
  c.drift_budget = 1e-2;
  Trajectory tr = evolve(u0, params, c);
  MembershipVerdict m = classify_data(u0, params, gs->m_omega);
  REQUIRE(m.set == MembershipSet::A_plus);
  Verdict v = classify_outcome(tr, m, params);
  CHECK(v.outcome == Outcome::Undecided);
  CHECK_FALSE(v.theory_consistent);
  CHECK(v.evidence.count("amplitude_ratio") == 1);
}

TEST_CASE("outcome classification: blowup branch and monitors", "[diagnostics]") {
  Params params = Params::make(2, 5.0, 1.0);
  auto gs = ground_state_cache().get(params);
  auto g = CartesianGrid::create(2, 256, 8.0);
  Field u0 = cartesian_from_radial(gs->profile, g, 0.5, 2.0);  // T_2 Q
  EvolveControls c;
  c.dt0 = 2e-4;
  c.t_end = 20.0;
  c.dt_floor = 1e-10;
  c.blowup_gradient_factor = 5.0;
  c.adapt = AdaptRule::gradient;
  c.snapshot_stride = 50;
  c.drift_budget = 1.0;
  VirialProbe probe{make_cutoff(CutoffKind::blowup, 4.0, GridRef(g))};
  Trajectory tr = evolve(u0, params, c, &probe);
  REQUIRE(tr.status == EvolveStatus::blowup_terminated);

  MembershipVerdict m = classify_data(u0, params, gs->m_omega);
  REQUIRE(m.set == MembershipSet::A_minus);
  Verdict v = classify_outcome(tr, m, params);
  CHECK(v.outcome == Outcome::Blowup);
  CHECK(v.theory_consistent);

  // the K upper bound holds at every recorded step
  CHECK(count_K_upper_bound_violations(tr, gs->m_omega) == 0);

  // V_R'' <= -4 delta_1 m_omega throughout (S_omega(u0) is deeply below m)
  double delta1 = 1.0 - m.S_omega_value / m.m_omega;
  long in_window = 0;
  for (const auto& rec : tr.series)
    if (rec.Vpp <= -4.0 * delta1 * m.m_omega) ++in_window;
  CHECK(in_window == static_cast<long>(tr.series.size()));
}

TEST_CASE("trapping delta calibration is positive on A_plus runs", "[diagnostics]") {
  Params params = Params::make(1, 7.0, 1.0);
  auto gs = ground_state_cache().get(params);
  auto g = CartesianGrid::create(1, 512, 25.0);
  Field u0 = cartesian_from_radial(gs->profile, g, 1.0, 0.3);
  EvolveControls c;
  c.dt0 = 2e-3;
  c.t_end = 2.0;
  c.dt_floor = 1e-9;
  c.adapt = AdaptRule::fixed;
  c.snapshot_stride = 100000;
  c.drift_budget = 1e-2;
  Trajectory tr = evolve(u0, params, c);
  double delta = calibrate_trapping_delta(tr, gs->m_omega, params);
  CHECK(delta > 0.0);
}
