#pragma once

// The experiment harness behind the CLI subcommands: ground-state solves,
// membership classification, evolution runs with streamed CSV, the
// verification suite, and concurrent parameter sweeps. Every command
// validates its configuration before producing any output file.

#include <atomic>
#include <thread>

#include "nls/config.hpp"
#include "nls/decoupling.hpp"
#include "nls/diagnostics.hpp"
#include "nls/io.hpp"
#include "nls/random_fields.hpp"
#include "nls/rescale.hpp"

namespace nls {

namespace fs = std::filesystem;

struct GroundStateCache {
  std::mutex mutex;
  std::map<std::tuple<int, double, double>, std::shared_ptr<const GroundState>> map;

  std::shared_ptr<const GroundState> get(const Params& params) {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(params.d, params.p, params.omega);
    auto it = map.find(key);
    if (it != map.end()) return it->second;
    auto gs = std::make_shared<const GroundState>(solve_ground_state(params));
    map.emplace(key, gs);
    return gs;
  }
};

inline GroundStateCache& ground_state_cache() {
  static GroundStateCache cache;
  return cache;
}

inline RadialGridPtr radial_grid_from_spec(const ExperimentConfig& cfg) {
  return RadialGrid::create(cfg.params.d, cfg.grid.kind == "radial" ? cfg.grid.n : 16384,
                            cfg.grid.kind == "radial" ? cfg.grid.r_max
                                                      : default_r_max(cfg.params.omega));
}

inline CartesianGridPtr cartesian_grid_from_spec(const ExperimentConfig& cfg) {
  if (cfg.grid.kind != "cartesian")
    throw ConfigError("this command needs grid.kind = 'cartesian'");
  return CartesianGrid::create(cfg.params.d, cfg.grid.n, cfg.grid.box_half_length);
}

// Radial representation of the configured initial data (all stock kinds are
// radially symmetric).
inline Field initial_data_radial(const ExperimentConfig& cfg, RadialGridPtr grid) {
  const auto& spec = cfg.initial_data;
  if (spec.kind == "gaussian") {
    double A = spec.amplitude, w = spec.width;
    return make_radial(grid,
                       [A, w](double r) { return Complex(A * std::exp(-r * r / (2.0 * w * w)), 0.0); },
                       "gaussian");
  }
  if (spec.kind == "file") {
    GroundState gs = read_profile(spec.path);
    return make_radial(grid,
                       [&](double r) { return interpolate_radial(gs.profile, r); },
                       "file_profile");
  }
  auto gs = ground_state_cache().get(cfg.params);
  if (spec.kind == "ground_state_multiple") {
    double c = spec.c;
    return make_radial(grid,
                       [&, c](double r) { return c * interpolate_radial(gs->profile, r); },
                       "ground_state_multiple");
  }
  // dilated_ground_state: eps^{-d/2} Q(r/eps), the mass-invariant dilation
  double eps = spec.eps;
  double amp = std::pow(eps, -0.5 * cfg.params.d);
  return make_radial(grid,
                     [&, eps, amp](double r) { return amp * interpolate_radial(gs->profile, r / eps); },
                     "dilated_ground_state");
}

inline Field initial_data_cartesian(const ExperimentConfig& cfg, CartesianGridPtr grid) {
  const auto& spec = cfg.initial_data;
  if (spec.kind == "gaussian") {
    double A = spec.amplitude, w = spec.width;
    return make_cartesian(grid,
                          [&, A, w](const std::array<double, 3>& x) {
                            double r2 = 0.0;
                            for (int a = 0; a < grid->dim(); ++a) r2 += x[a] * x[a];
                            return Complex(A * std::exp(-r2 / (2.0 * w * w)), 0.0);
                          },
                          "gaussian");
  }
  if (spec.kind == "file") {
    GroundState gs = read_profile(spec.path);
    return cartesian_from_radial(gs.profile, grid);
  }
  auto gs = ground_state_cache().get(cfg.params);
  if (spec.kind == "ground_state_multiple")
    return cartesian_from_radial(gs->profile, grid, 1.0, spec.c);
  return cartesian_from_radial(gs->profile, grid, spec.eps,
                               std::pow(spec.eps, -0.5 * cfg.params.d));
}

inline double threshold_for(const ExperimentConfig& cfg) {
  if (cfg.params.energy_critical()) return explicit_aubin_talenti(3).E0_of_W;
  return ground_state_cache().get(cfg.params)->m_omega;
}

namespace detail {

inline void write_json(const fs::path& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path.string());
  os << j.dump(2) << "\n";
}

inline Json membership_json(const MembershipVerdict& v) {
  return Json{{"S_omega", v.S_omega_value},
              {"m_omega", v.m_omega},
              {"K", v.K_value},
              {"set", to_string(v.set)},
              {"margin", v.margin}};
}

}  // namespace detail

// --------------------------------------------------------------------------
// ground-state
// --------------------------------------------------------------------------

inline Json run_ground_state(const ExperimentConfig& cfg, const fs::path& outdir) {
  fs::create_directories(outdir);
  Json summary;
  if (cfg.params.energy_critical()) {
    auto at = explicit_aubin_talenti(3);
    GroundState as_gs;
    as_gs.profile = at.profile;
    as_gs.d = 3;
    as_gs.p = cfg.params.p;
    as_gs.omega = 0.0;  // marks the omega-independent extremal profile
    as_gs.m_omega = at.E0_of_W;
    as_gs.Q0 = 1.0;
    as_gs.residual_sup = at.residual_sup;
    write_profile((outdir / "profile.txt").string(), as_gs);
    double identity = std::pow(at.sobolev_constant, -3.0) / 3.0;
    summary = Json{{"regime", "energy_critical"},
                   {"m_omega", at.E0_of_W},
                   {"E0_of_W", at.E0_of_W},
                   {"sobolev_constant", at.sobolev_constant},
                   {"sobolev_identity_residual",
                    std::abs(identity - at.E0_of_W) / std::abs(at.E0_of_W)},
                   {"residual_sup", at.residual_sup},
                   {"omega_independent", true}};
  } else {
    auto gs = ground_state_cache().get(cfg.params);
    write_profile((outdir / "profile.txt").string(), *gs);
    summary = Json{{"regime", "subcritical"},
                   {"m_omega", gs->m_omega},
                   {"Q0", gs->Q0},
                   {"residual_sup", gs->residual_sup},
                   {"K_of_Q", gs->K_of_Q},
                   {"decay_rate", gs->decay_rate},
                   {"decay_rate_expected", std::sqrt(cfg.params.omega)}};
  }
  detail::write_json(outdir / "summary.json", summary);
  return summary;
}

// --------------------------------------------------------------------------
// classify
// --------------------------------------------------------------------------

inline Json run_classify(const ExperimentConfig& cfg, const fs::path& outdir) {
  double m = threshold_for(cfg);
  auto grid = radial_grid_from_spec(cfg);
  Field u0 = initial_data_radial(cfg, grid);
  MembershipVerdict v = classify_data(u0, cfg.params, m);
  fs::create_directories(outdir);
  Json out = detail::membership_json(v);
  out["initial_data"] = cfg.initial_data.kind;
  detail::write_json(outdir / "verdict.json", out);
  return out;
}

// --------------------------------------------------------------------------
// evolve
// --------------------------------------------------------------------------

inline Json run_evolve(const ExperimentConfig& cfg, const fs::path& outdir) {
  auto grid = cartesian_grid_from_spec(cfg);
  Field u0 = initial_data_cartesian(cfg, grid);
  double m = threshold_for(cfg);

  // membership judged on the clean radial representation
  MembershipVerdict membership =
      classify_data(initial_data_radial(cfg, radial_grid_from_spec(cfg)), cfg.params, m);

  fs::create_directories(outdir);
  std::optional<VirialProbe> probe;
  if (cfg.diagnostics.virial) {
    double R = cfg.diagnostics.virial_R > 0.0 ? cfg.diagnostics.virial_R
                                              : 0.5 * grid->box_half_length();
    CutoffKind kind = cfg.diagnostics.cutoff == "blowup" ? CutoffKind::blowup
                                                         : CutoffKind::scattering;
    probe = VirialProbe{make_cutoff(kind, R, GridRef(grid))};
  }

  std::optional<TrajectoryCsvWriter> csv;
  if (cfg.output.csv) csv.emplace((outdir / "series.csv").string());
  auto sink = [&](const StepRecord& rec) {
    if (csv) csv->write(rec);
  };

  Trajectory tr = evolve(u0, cfg.params, cfg.controls, probe ? &*probe : nullptr, sink);
  ConservationReport cons = conservation_report(tr, cfg.params);
  Verdict verdict = classify_outcome(tr, membership, cfg.params);

  // post-hoc box check: largest boundary amplitude relative to the peak
  double boundary_ratio = 0.0;
  {
    const CartesianGrid& g = *grid;
    std::array<int, 3> ijk;
    for (const auto& snap : tr.snapshots) {
      double peak = snap.max_abs();
      if (peak <= 0.0) continue;
      double edge = 0.0;
      for (std::size_t idx = 0; idx < snap.values.size(); ++idx) {
        g.unflatten(idx, ijk);
        bool on_edge = false;
        for (int a = 0; a < g.dim(); ++a)
          if (ijk[a] == 0) on_edge = true;
        if (on_edge) edge = std::max(edge, std::abs(snap.values[idx]));
      }
      boundary_ratio = std::max(boundary_ratio, edge / peak);
    }
  }

  Json summary;
  summary["status"] = to_string(tr.status);
  summary["t_final"] = tr.times.back();
  summary["steps"] = tr.series.size() - 1;
  summary["drifts"] = Json{{"mass", cons.mass_drift},
                           {"energy", cons.energy_drift},
                           {"action", cons.action_drift},
                           {"momentum", cons.momentum_drift}};
  summary["membership"] = detail::membership_json(membership);
  summary["verdict"] = Json{{"outcome", to_string(verdict.outcome)},
                            {"theory_consistent", verdict.theory_consistent},
                            {"evidence", verdict.evidence}};
  summary["boundary_amplitude_ratio"] = boundary_ratio;
  summary["spacetime_mc_norm"] = tr.spacetime_mc_norm;
  summary["spacetime_p_norm"] = tr.spacetime_p_norm;

  if (membership.set == MembershipSet::A_minus) {
    // blowup-side monitors: the K upper bound and the Vpp window
    summary["K_upper_bound_violations"] = count_K_upper_bound_violations(tr, m);
    double delta1 = 1.0 - membership.S_omega_value / m;
    summary["delta1"] = delta1;
    if (probe) {
      double bound = -4.0 * delta1 * m;
      long window_len = 0, best = 0;
      for (const auto& rec : tr.series) {
        if (rec.Vpp <= bound) ++window_len;
        else window_len = 0;
        best = std::max(best, window_len);
      }
      summary["vpp_bound"] = bound;
      summary["vpp_window_steps"] = best;
      summary["vpp_window_fraction"] =
          static_cast<double>(best) / static_cast<double>(tr.series.size());
    }
  }
  if (membership.set == MembershipSet::A_plus)
    summary["K_sign_violations"] = count_K_sign_violations(tr, true);

  if (cfg.output.plots) {
    std::vector<PlotSeries> snaps;
    std::size_t stride = std::max<std::size_t>(1, tr.snapshots.size() / 6);
    for (std::size_t i = 0; i < tr.snapshots.size(); i += stride) {
      char name[64];
      std::snprintf(name, sizeof(name), "t=%.3g", tr.snapshot_times[i]);
      snaps.push_back(amplitude_slice(tr.snapshots[i], name));
    }
    write_svg_plot((outdir / "snapshots.svg").string(), "|u| along x", snaps);

    PlotSeries sk{"K", {}, {}}, sg{"grad_norm_sq", {}, {}}, sv{"V_R", {}, {}};
    for (const auto& rec : tr.series) {
      sk.x.push_back(rec.t);
      sk.y.push_back(rec.bundle.K);
      sg.x.push_back(rec.t);
      sg.y.push_back(rec.bundle.K_quad);
      sv.x.push_back(rec.t);
      sv.y.push_back(rec.V);
    }
    write_svg_plot((outdir / "series.svg").string(), "diagnostics", {sk, sg, sv});
  }

  detail::write_json(outdir / "summary.json", summary);
  return summary;
}

// --------------------------------------------------------------------------
// verify
// --------------------------------------------------------------------------

struct VerifyResult {
  Json report;
  bool all_pass = true;
};

inline VerifyResult run_verify(const ExperimentConfig& cfg, const fs::path& outdir) {
  const Params& params = cfg.params;
  std::mt19937_64 rng(cfg.seed);
  VerifyResult out;
  Json checks = Json::array();
  auto push = [&](const std::string& name, double value, double tol, bool pass) {
    checks.push_back(Json{{"name", name}, {"value", value}, {"tolerance", tol},
                          {"pass", pass}});
    out.all_pass = out.all_pass && pass;
  };

  // fine enough that the T_2 rescale in the lambda-composition check stays
  // interpolation-limited well below its 1e-6 bar
  int n_cart = (params.d == 1) ? 2048 : (params.d == 2 ? 256 : 128);
  auto grid = CartesianGrid::create(params.d, n_cart, 16.0);

  {  // scaling identities on random bumps
    double worst1 = 0.0, worst2 = 0.0, worst_fd = 0.0;
    for (int i = 0; i < 20; ++i) {
      Field u = random_bump(grid, rng);
      IdentityReport r = scaling_identities_check(u, params);
      worst1 = std::max(worst1, r.eq_first_residual);
      worst2 = std::max(worst2, r.eq_second_residual);
      worst_fd = std::max(worst_fd, r.fd_derivative_rel);
    }
    push("scaling_identity_first", worst1, 1e-10, worst1 < 1e-10);
    push("scaling_identity_second", worst2, 1e-10, worst2 < 1e-10);
    push("action_derivative_vs_K", worst_fd, 1e-6, worst_fd < 1e-6);
  }

  {  // lambda structure
    bool ok = true;
    double worst_comp = 0.0;
    for (int i = 0; i < 10; ++i) {
      Field u = random_bump(grid, rng);
      ScalingCoefficients c = scaling_coefficients(u, params);
      double l0 = find_lambda_zero(c);
      ok = ok && (c.K_at(0.5 * l0) > 0.0) && (c.K_at(2.0 * l0) < 0.0);
      Field u2 = rescale(u, 2.0, RescaleMode::mass_invariant);
      double l2 = find_lambda_zero(u2, params);
      worst_comp = std::max(worst_comp, std::abs(l2 - 0.5 * l0) / (0.5 * l0));
    }
    push("lambda_zero_sign_pattern", ok ? 0.0 : 1.0, 0.5, ok);
    push("lambda_zero_composition", worst_comp, 1e-6, worst_comp < 1e-6);
  }

  {  // energy trapping and H_omega positivity
    long violations = 0;
    double hmin = 0.0;
    for (int i = 0; i < 50; ++i) {
      Field u = random_bump(grid, rng);
      ScalingCoefficients c = scaling_coefficients(u, params);
      double l0 = find_lambda_zero(c);
      FunctionalBundle b = c.bundle_at(0.75 * l0);  // K > 0 side
      double G = 0.5 * b.K_quad + params.d / (2.0 * (params.d + 2.0)) * b.L_mass_crit;
      if (!(trapping_constant(params) * G <= b.energy * (1.0 + 1e-12) &&
            b.energy <= G * (1.0 + 1e-12)))
        ++violations;
      hmin = std::min(hmin, b.H_omega);
    }
    push("energy_trapping_violations", static_cast<double>(violations), 0.5, violations == 0);
    push("H_omega_min", hmin, 0.0, hmin >= 0.0);
  }

  {  // decoupling: two bumps at growing separations
    auto dgrid = CartesianGrid::create(1, 2048, 60.0);
    Params p1 = (params.d == 1) ? params : Params::make(1, 7.0, params.omega);
    auto gauss = make_cartesian(dgrid,
                                [](const std::array<double, 3>& x) {
                                  return Complex(std::exp(-x[0] * x[0] / 8.0), 0.0);
                                },
                                "gauss_w2");
    double prev = 1e300;
    bool monotone = true;
    double final_defect = 0.0;
    for (double sep : {10.0, 20.0, 40.0}) {
      DecouplingScenario sc;
      sc.profiles = {gauss, gauss};
      sc.translations = {{-0.5 * sep, 0, 0}, {0.5 * sep, 0, 0}};
      sc.phases = {0.3, 1.1};
      sc.time_shifts = {0.0, 0.0};
      auto rep = decoupling_check(sc, p1);
      double defect = rep.max_defect();
      monotone = monotone && (defect <= prev + 1e-14);
      prev = defect;
      final_defect = defect;
    }
    push("decoupling_monotone", monotone ? 0.0 : 1.0, 0.5, monotone);
    push("decoupling_final_defect", final_defect, 1e-8, final_defect < 1e-8);
  }

  if (params.d <= 2) {  // virial identity on a short resolved run
    auto vgrid = CartesianGrid::create(params.d, params.d == 1 ? 512 : 128, 12.0);
    Field u0 = make_cartesian(vgrid,
                              [&](const std::array<double, 3>& x) {
                                double r2 = 0.0;
                                for (int a = 0; a < params.d; ++a) r2 += x[a] * x[a];
                                return Complex(0.5 * std::exp(-r2), 0.0);
                              },
                              "gaussian");
    EvolveControls ctl;
    ctl.dt0 = 2e-3;
    ctl.t_end = 0.4;
    ctl.dt_floor = 1e-8;
    ctl.adapt = AdaptRule::fixed;
    ctl.snapshot_stride = 1000;
    ctl.drift_budget = 1e-3;
    VirialProbe pr{make_cutoff(CutoffKind::scattering, 6.0, GridRef(vgrid))};
    Trajectory tr = evolve(u0, params, ctl, &pr);
    auto rep = virial_identity_check(tr);
    push("virial_identity_second", rep.max_second_residual, 1e-3,
         rep.max_second_residual < 1e-3);
  }

  if (params.d >= 2) {  // radial Sobolev constants
    auto rgrid = RadialGrid::create(params.d, 8192, 40.0);
    double worst = 0.0, worst_hom = 0.0;
    for (int i = 0; i < 10; ++i) {
      Field u = random_radial_bump(rgrid, rng);
      for (double R : cfg.diagnostics.sobolev_radii) {
        auto rep = radial_sobolev_check(u, R, params);
        if (rep.exterior_mass < 1e-280) continue;
        worst = std::max(worst, rep.implied_const_p / rep.bound_p);
        worst = std::max(worst, rep.implied_const_mc / rep.bound_mc);
        Field u2 = u;
        for (auto& v : u2.values) v *= 2.0;
        auto rep2 = radial_sobolev_check(u2, R, params);
        if (rep.implied_const_p > 0.0)
          worst_hom = std::max(worst_hom, std::abs(rep2.implied_const_p / rep.implied_const_p - 1.0));
      }
    }
    push("radial_sobolev_constant_ratio", worst, 1.0 + 1e-9, worst <= 1.0 + 1e-9);
    push("radial_sobolev_homogeneity", worst_hom, 1e-12, worst_hom < 1e-12);
  }

  {  // threshold consistency: H_omega >= m_omega on {K < 0}
    double m = threshold_for(cfg);
    double min_gap = 1e300;
    for (int i = 0; i < 50; ++i) {
      Field u = random_bump(grid, rng);
      ScalingCoefficients c = scaling_coefficients(u, params);
      double l0 = find_lambda_zero(c);
      FunctionalBundle b = c.bundle_at(1.5 * l0);  // K < 0 side
      min_gap = std::min(min_gap, b.H_omega - m);
    }
    push("threshold_H_omega_gap", min_gap, -1e-6, min_gap > -1e-6);
  }

  out.report["checks"] = checks;
  out.report["all_pass"] = out.all_pass;
  out.report["params"] = Json{{"d", params.d}, {"p", params.p}, {"omega", params.omega}};
  out.report["seed"] = cfg.seed;
  fs::create_directories(outdir);
  detail::write_json(outdir / "verify.json", out.report);
  return out;
}

// --------------------------------------------------------------------------
// sweep
// --------------------------------------------------------------------------

inline Json run_sweep(const ExperimentConfig& cfg, const fs::path& outdir, int threads) {
  if (cfg.sweep.empty()) throw ConfigError("sweep config has no entries");
  fs::create_directories(outdir);
  threads = std::max(1, threads);

  std::vector<Json> results(cfg.sweep.size());
  std::vector<std::string> errors(cfg.sweep.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cfg.sweep.size()) return;
      try {
        ExperimentConfig sub = apply_patch(cfg, cfg.sweep[i].patch);
        results[i] = run_evolve(sub, outdir / cfg.sweep[i].name);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  Json summary = Json::array();
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
    Json entry{{"name", cfg.sweep[i].name}};
    if (!errors[i].empty()) entry["error"] = errors[i];
    else entry["summary"] = results[i];
    summary.push_back(entry);
  }
  Json out{{"experiments", summary}};
  detail::write_json(outdir / "sweep.json", out);
  return out;
}

}  // namespace nls
