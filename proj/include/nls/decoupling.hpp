#pragma once

// Profile-decomposition decoupling checker.
//
// Builds phi = sum_j exp(i theta_j) [e^{-i t_j Delta} phi^j](. - x_j) + w
// and measures, for each functional F in {M, ||grad||^2, E, S_omega, K,
// H_omega}, the additivity defect
//   | F(phi) - sum_j F(piece_j) - F(w) |.
// Translations use the exact Fourier phase shift; the free flow is the
// exact spectral multiplier, so the defects isolate genuine cross terms.

#include <optional>

#include "nls/functionals.hpp"

namespace nls {

struct DecouplingScenario {
  std::vector<Field> profiles;
  std::vector<std::array<double, 3>> translations;
  std::vector<double> phases;
  std::vector<double> time_shifts;
  std::optional<Field> remainder;
};

struct DecouplingReport {
  double mass = 0.0;
  double grad = 0.0;
  double energy = 0.0;
  double action = 0.0;
  double K = 0.0;
  double H_omega = 0.0;
  std::vector<double> pair_separations;  // |x_j - x_m| + |t_j - t_m| per pair

  double max_defect() const {
    return std::max({mass, grad, energy, action, K, H_omega});
  }
};

inline DecouplingReport decoupling_check(const DecouplingScenario& s, const Params& params) {
  const std::size_t J = s.profiles.size();
  if (J == 0) throw InvalidParameter("decoupling scenario has no profiles");
  if (s.translations.size() != J || s.phases.size() != J || s.time_shifts.size() != J)
    throw InvalidParameter("decoupling scenario arrays must share length");

  const CartesianGrid& g = s.profiles[0].cart();
  double L = g.box_half_length();
  for (const auto& f : s.profiles) require_same_grid(s.profiles[0], f);

  // assemble the pieces
  std::vector<Field> pieces;
  pieces.reserve(J);
  for (std::size_t j = 0; j < J; ++j) {
    for (int a = 0; a < g.dim(); ++a)
      if (std::abs(s.translations[j][a]) >= L)
        throw SupportOverflow("translation exceeds the box");
    Field piece = free_propagate(s.profiles[j], -s.time_shifts[j]);
    piece = translate(piece, s.translations[j]);
    Complex phase = std::polar(1.0, s.phases[j]);
    for (auto& v : piece.values) v *= phase;
    pieces.push_back(std::move(piece));
  }

  Field sum = pieces[0];
  sum.tag = "decoupling_sum";
  for (std::size_t j = 1; j < J; ++j)
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] += pieces[j].values[i];
  if (s.remainder) {
    require_same_grid(s.profiles[0], *s.remainder);
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] += s.remainder->values[i];
  }

  FunctionalBundle total = evaluate(sum, params);
  FunctionalBundle parts;  // accumulated
  for (const auto& piece : pieces) {
    FunctionalBundle b = evaluate(piece, params);
    parts.mass += b.mass;
    parts.K_quad += b.K_quad;
    parts.energy += b.energy;
    parts.action += b.action;
    parts.K += b.K;
    parts.H_omega += b.H_omega;
  }
  if (s.remainder) {
    FunctionalBundle b = evaluate(*s.remainder, params);
    parts.mass += b.mass;
    parts.K_quad += b.K_quad;
    parts.energy += b.energy;
    parts.action += b.action;
    parts.K += b.K;
    parts.H_omega += b.H_omega;
  }

  DecouplingReport r;
  r.mass = std::abs(total.mass - parts.mass);
  r.grad = std::abs(total.K_quad - parts.K_quad);
  r.energy = std::abs(total.energy - parts.energy);
  r.action = std::abs(total.action - parts.action);
  r.K = std::abs(total.K - parts.K);
  r.H_omega = std::abs(total.H_omega - parts.H_omega);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t m = j + 1; m < J; ++m) {
      double dx = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        double diff = s.translations[j][a] - s.translations[m][a];
        dx += diff * diff;
      }
      r.pair_separations.push_back(std::sqrt(dx) +
                                   std::abs(s.time_shifts[j] - s.time_shifts[m]));
    }
  return r;
}

}  // namespace nls
