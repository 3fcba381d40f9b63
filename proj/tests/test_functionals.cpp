#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace nls;
using Catch::Approx;

namespace {

Field gaussian_1d(CartesianGridPtr g, double amp, double width) {
  return make_cartesian(g, [=](const std::array<double, 3>& x) {
    return Complex(amp * std::exp(-x[0] * x[0] / (2.0 * width * width)), 0.0);
  });
}

}  // namespace

TEST_CASE("bundle of the zero field vanishes", "[functionals]") {
  auto g = CartesianGrid::create(1, 64, 10.0);
  Params p = Params::make(1, 7.0, 1.0);
  FunctionalBundle b = evaluate(make_zero(g), p);
  CHECK(b.mass == 0.0);
  CHECK(b.energy == 0.0);
  CHECK(b.action == 0.0);
  CHECK(b.K == 0.0);
  CHECK(b.H_omega == 0.0);
}

TEST_CASE("bundle identities hold to floating-point consistency", "[functionals]") {
  std::mt19937_64 rng(42);
  for (auto [d, pp] : {std::pair{1, 7.0}, {2, 5.0}, {3, 4.0}}) {
    Params params = Params::make(d, pp, 1.3);
    auto g = CartesianGrid::create(d, d == 1 ? 512 : (d == 2 ? 128 : 32), 15.0);
    for (int i = 0; i < 5; ++i) {
      Field u = random_bump(g, rng);
      FunctionalBundle b = evaluate(u, params);
      // S = E + (omega/2) M by construction; check the independent recompute
      double S_indep = b.energy + 0.5 * params.omega * b.mass;
      CHECK(std::abs(b.action - S_indep) <= 1e-12 * (std::abs(b.action) + 1.0));
      CHECK(b.K == b.K_quad + b.K_nonlin);
      // H = S - K/2 equals the closed form (omega/2) M + c Lp1
      double H_closed = 0.5 * params.omega * b.mass +
                        (d * (pp - 1.0) - 4.0) / (4.0 * (pp + 1.0)) * b.Lp1;
      CHECK(std::abs(b.H_omega - H_closed) <=
            1e-12 * (std::abs(b.H_omega) + std::abs(H_closed)));
      CHECK(b.H_omega >= 0.0);
    }
  }
}

TEST_CASE("critical bundle for d=3", "[functionals]") {
  Params params = Params::make(3, 5.0, 2.0);
  auto g = CartesianGrid::create(3, 32, 10.0);
  CHECK(evaluate_critical(make_zero(g), params).H0 == 0.0);

  std::mt19937_64 rng(17);
  Field u = random_bump(g, rng);
  CriticalBundle cb = evaluate_critical(u, params);
  FunctionalBundle b = evaluate(u, params);
  CHECK(cb.H0 >= 0.0);
  CHECK(cb.K0 <= b.K + 1e-12);        // K0 = K - (3/5) Lmc at p = 5
  CHECK(cb.H0 <= b.H_omega + 1e-12);  // H0 = H_omega - (omega/2) M at p = 5
  CHECK(cb.K0 == Approx(b.K - 0.6 * b.L_mass_crit).epsilon(1e-12));

  Params bad = Params::make(2, 5.0, 1.0);
  CHECK_THROWS_AS(evaluate_critical(make_zero(CartesianGrid::create(2, 16, 1.0)), bad),
                  InvalidParameter);
}

TEST_CASE("rescale: identity, mass invariance, closed-form gaussian", "[functionals]") {
  auto g = CartesianGrid::create(1, 1024, 30.0);
  Field u = gaussian_1d(g, 1.0, 2.0);

  Field id = rescale(u, 1.0, RescaleMode::mass_invariant);
  double err = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    err = std::max(err, std::abs(id.values[i] - u.values[i]));
  CHECK(err < 1e-13);

  // change-of-variables oracle: T_lambda gaussian(w) = lambda^{d/2} gaussian(w/lambda)
  for (double lam : {0.5, 2.0, 3.0}) {
    Field scaled = rescale(u, lam, RescaleMode::mass_invariant);
    Field ref = gaussian_1d(g, std::pow(lam, 0.5), 2.0 / lam);
    double diff = 0.0;
    for (std::size_t i = 0; i < ref.values.size(); ++i)
      diff = std::max(diff, std::abs(scaled.values[i] - ref.values[i]));
    CHECK(diff < 1e-9);
    double m0 = quadrature_Lq(u, 2.0);
    double m1 = quadrature_Lq(scaled, 2.0);
    CHECK(std::abs(m1 - m0) / m0 < 1e-8);
  }

  CHECK_THROWS_AS(rescale(u, 0.0, RescaleMode::mass_invariant), InvalidParameter);
  CHECK_THROWS_AS(rescale(u, -2.0, RescaleMode::mass_invariant), InvalidParameter);
  // width 2 gaussian expanded 20x leaves the 20-box
  CHECK_THROWS_AS(rescale(u, 0.05, RescaleMode::mass_invariant), SupportOverflow);
}

TEST_CASE("mass invariance of T_lambda across the [1/4,4] range", "[functionals]") {
  auto g = CartesianGrid::create(1, 4096, 40.0);
  // centered two-scale bump; resolved at lambda = 4, inside the box at 1/4
  Field u = make_cartesian(g, [](const std::array<double, 3>& x) {
    return std::polar(1.0, 0.4 * x[0]) * std::exp(-x[0] * x[0] / 2.0) +
           Complex(0.5, 0.2) * std::exp(-x[0] * x[0] / (2.0 * 1.5 * 1.5));
  });
  double m0 = quadrature_Lq(u, 2.0);
  for (double lam : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    Field s = rescale(u, lam, RescaleMode::mass_invariant);
    CHECK(std::abs(quadrature_Lq(s, 2.0) - m0) / m0 < 1e-8);
  }
}

TEST_CASE("energy-invariant rescale preserves the gradient norm", "[functionals]") {
  auto g = CartesianGrid::create(3, 64, 12.0);
  Field u = make_cartesian(g, [](const std::array<double, 3>& x) {
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return Complex(std::exp(-r2 / 2.0), 0.0);
  });
  double g0 = gradient_norm_sq(u);
  Field s = rescale(u, 2.0, RescaleMode::energy_invariant);
  CHECK(std::abs(gradient_norm_sq(s) - g0) / g0 < 1e-5);  // 64^3 interpolation floor
}

TEST_CASE("K(T_lambda u)/lambda^2 is strictly decreasing", "[functionals]") {
  Params params = Params::make(2, 5.0, 1.0);
  auto g = CartesianGrid::create(2, 128, 15.0);
  std::mt19937_64 rng(23);
  Field u = random_bump(g, rng);
  ScalingCoefficients c = scaling_coefficients(u, params);
  double prev = c.g_at(0.25);
  for (double lam : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    double cur = c.g_at(lam);
    CHECK(cur < prev);
    prev = cur;
  }
  // rescaled-field route agrees with the closed-form lambda expansion
  Field u2 = rescale(u, 2.0, RescaleMode::mass_invariant);
  FunctionalBundle b2 = evaluate(u2, params);
  CHECK(b2.K == Approx(c.K_at(2.0)).epsilon(1e-6));
  CHECK(b2.action == Approx(c.action_at(2.0)).epsilon(1e-6));
}

TEST_CASE("find_lambda_zero: root, sign pattern, composition", "[functionals]") {
  Params params = Params::make(1, 7.0, 1.0);
  auto g = CartesianGrid::create(1, 1024, 20.0);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 6; ++i) {
    Field u = random_bump(g, rng);
    ScalingCoefficients c = scaling_coefficients(u, params);
    double l0 = find_lambda_zero(c);
    double scale = c.K_at(l0 / 2.0) - c.K_at(2.0 * l0);
    CHECK(std::abs(c.K_at(l0)) <= 1e-8 * std::abs(scale));
    CHECK(c.K_at(0.5 * l0) > 0.0);
    CHECK(c.K_at(2.0 * l0) < 0.0);

    Field u2 = rescale(u, 2.0, RescaleMode::mass_invariant);
    double l2 = find_lambda_zero(u2, params);
    CHECK(l2 == Approx(0.5 * l0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(find_lambda_zero(make_zero(g), params), InvalidParameter);
}

TEST_CASE("scaling identities on random bumps", "[functionals]") {
  std::mt19937_64 rng(77);
  for (auto [d, pp] : {std::pair{1, 7.0}, {2, 5.0}, {3, 4.0}}) {
    Params params = Params::make(d, pp, 0.8);
    auto g = CartesianGrid::create(d, d == 1 ? 512 : (d == 2 ? 128 : 32), 14.0);
    for (int i = 0; i < 4; ++i) {
      Field u = random_bump(g, rng);
      IdentityReport r = scaling_identities_check(u, params);
      CHECK(r.eq_first_residual < 1e-10);
      CHECK(r.eq_second_residual < 1e-10);
      CHECK(r.fd_derivative_rel < 1e-6);
    }
  }
  // zero field: all residuals vanish
  Params params = Params::make(1, 7.0, 1.0);
  auto g = CartesianGrid::create(1, 64, 5.0);
  IdentityReport r0 = scaling_identities_check(make_zero(g), params);
  CHECK(r0.eq_first_residual == 0.0);
  CHECK(r0.eq_second_residual == 0.0);
}

TEST_CASE("K is positive for small-gradient fields", "[functionals]") {
  // positivity near zero: fixed shape, gradient norm swept downward
  Params params = Params::make(2, 5.0, 1.0);
  auto g = CartesianGrid::create(2, 128, 12.0);
  std::mt19937_64 rng(19);
  Field shape = random_bump(g, rng);
  double gref = std::sqrt(gradient_norm_sq(shape));
  for (double target : {1e-2, 1e-3, 1e-4}) {
    Field u = shape;
    double c = target / gref;
    for (auto& v : u.values) v *= c;
    FunctionalBundle b = evaluate(u, params);
    CHECK(b.K > 0.0);
  }
}

TEST_CASE("energy trapping two-sided bound on {K >= 0}", "[functionals]") {
  std::mt19937_64 rng(4);
  for (auto [d, pp] : {std::pair{1, 7.0}, {2, 5.0}}) {
    Params params = Params::make(d, pp, 1.0);
    auto g = CartesianGrid::create(d, d == 1 ? 512 : 128, 14.0);
    for (int i = 0; i < 10; ++i) {
      Field u = random_bump(g, rng);
      ScalingCoefficients c = scaling_coefficients(u, params);
      double l0 = find_lambda_zero(c);
      FunctionalBundle b = c.bundle_at(0.8 * l0);
      REQUIRE(b.K >= 0.0);
      double G = positive_energy_part(b, params);
      CHECK(trapping_constant(params) * G <= b.energy * (1.0 + 1e-12));
      CHECK(b.energy <= G * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("decoupling: single profile and disjoint supports are exact", "[functionals]") {
  Params params = Params::make(1, 7.0, 1.0);
  auto g = CartesianGrid::create(1, 1024, 30.0);
  Field gauss = gaussian_1d(g, 1.0, 1.0);

  DecouplingScenario single;
  single.profiles = {gauss};
  single.translations = {{0.0, 0.0, 0.0}};
  single.phases = {0.0};
  single.time_shifts = {0.0};
  auto rep = decoupling_check(single, params);
  CHECK(rep.max_defect() < 1e-12);

  // two far-separated narrow bumps: cross terms below roundoff
  DecouplingScenario pair;
  pair.profiles = {gauss, gauss};
  pair.translations = {{-14.0, 0.0, 0.0}, {14.0, 0.0, 0.0}};
  pair.phases = {0.7, 2.1};
  pair.time_shifts = {0.0, 0.0};
  auto rep2 = decoupling_check(pair, params);
  CHECK(rep2.mass < 1e-12);
  REQUIRE(rep2.pair_separations.size() == 1);
  CHECK(rep2.pair_separations[0] == Approx(28.0));
}

TEST_CASE("decoupling defects shrink with separation", "[functionals]") {
  Params params = Params::make(1, 7.0, 1.0);
  auto g = CartesianGrid::create(1, 2048, 60.0);
  Field gauss = make_cartesian(g, [](const std::array<double, 3>& x) {
    return Complex(std::exp(-x[0] * x[0] / 8.0), 0.0);  // width 2
  });
  // remainder centered between the profiles, narrow enough to decouple too
  Field w = make_cartesian(g, [](const std::array<double, 3>& x) {
    return Complex(0.1 * std::exp(-x[0] * x[0] / 8.0), 0.0);
  });
  double prev = 1e300;
  double last = 0.0;
  for (double sep : {10.0, 20.0, 40.0}) {
    DecouplingScenario sc;
    sc.profiles = {gauss, gauss};
    sc.translations = {{-0.5 * sep, 0.0, 0.0}, {0.5 * sep, 0.0, 0.0}};
    sc.phases = {0.4, 1.9};
    sc.time_shifts = {0.2, -0.3};
    sc.remainder = w;
    auto rep = decoupling_check(sc, params);
    last = rep.max_defect();
    CHECK(last <= prev + 1e-14);
    prev = last;
  }
  CHECK(last < 1e-8);
}

TEST_CASE("H_omega stays nonnegative across omega", "[functionals]") {
  auto g = CartesianGrid::create(2, 128, 12.0);
  std::mt19937_64 rng(55);
  for (double omega : {0.1, 1.0, 10.0}) {
    Params params = Params::make(2, 5.0, omega);
    for (int i = 0; i < 5; ++i) {
      FunctionalBundle b = evaluate(random_bump(g, rng), params);
      CHECK(b.H_omega >= 0.0);
    }
  }
}

TEST_CASE("decoupling rejects translations that leave the box", "[functionals]") {
  Params params = Params::make(1, 7.0, 1.0);
  auto g = CartesianGrid::create(1, 256, 10.0);
  Field gauss = gaussian_1d(g, 1.0, 1.0);
  DecouplingScenario sc;
  sc.profiles = {gauss};
  sc.translations = {{15.0, 0.0, 0.0}};
  sc.phases = {0.0};
  sc.time_shifts = {0.0};
  CHECK_THROWS_AS(decoupling_check(sc, params), SupportOverflow);
}

TEST_CASE("quadrature rejects q below one", "[functionals]") {
  auto g = CartesianGrid::create(1, 64, 5.0);
  CHECK_THROWS_AS(quadrature_Lq(make_zero(g), 0.5), InvalidParameter);
}

TEST_CASE("radial rescale overflows like the cartesian one", "[functionals]") {
  auto g = RadialGrid::create(2, 1024, 20.0);
  Field u = make_radial(g, [](double r) { return Complex(std::exp(-r * r / 8.0), 0.0); });
  CHECK_NOTHROW(rescale(u, 0.8, RescaleMode::mass_invariant));
  CHECK_THROWS_AS(rescale(u, 0.05, RescaleMode::mass_invariant), SupportOverflow);
}

TEST_CASE("energy-invariant scaling drives K to the critical K0", "[functionals]") {
  // d=3, p=5: K(T~_lambda u) = K0(u) + (3/5) lambda^(-4/3) Lmc(u), so the
  // full functional converges to the critical one as lambda grows
  Params params = Params::make(3, 5.0, 1.0);
  auto g = CartesianGrid::create(3, 64, 12.0);
  Field u = make_cartesian(g, [](const std::array<double, 3>& x) {
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return Complex(0.9 * std::exp(-r2 / 8.0), 0.0);  // wide, so T~_2.25 stays resolved
  });
  CriticalBundle cb = evaluate_critical(u, params);
  FunctionalBundle b = evaluate(u, params);
  double prev_gap = std::abs(b.K - cb.K0);
  for (double lam : {1.5, 2.25}) {
    Field s = rescale(u, lam, RescaleMode::energy_invariant);
    FunctionalBundle bs = evaluate(s, params);
    double predicted = cb.K0 + 0.6 * std::pow(lam, -4.0 / 3.0) * b.L_mass_crit;
    CHECK(bs.K == Approx(predicted).epsilon(2e-3));
    double gap = std::abs(bs.K - cb.K0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
    // H_omega(T~_lambda u) = (omega/2) lambda^-2 M + H0 likewise
    double predicted_H = 0.5 * params.omega * std::pow(lam, -2.0) * b.mass + cb.H0;
    CHECK(bs.H_omega == Approx(predicted_H).epsilon(2e-3));
  }
}
