#pragma once

// Field: a complex state vector bound to a grid. Immutable by convention:
// operations return new fields. A short creation tag travels with the data
// for provenance in logs and output files.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nls/grids.hpp"

namespace nls {

using CartesianGridPtr = std::shared_ptr<const CartesianGrid>;
using RadialGridPtr = std::shared_ptr<const RadialGrid>;
using GridRef = std::variant<CartesianGridPtr, RadialGridPtr>;

struct Field {
  GridRef grid;
  std::vector<Complex> values;
  std::string tag;

  bool is_cartesian() const { return std::holds_alternative<CartesianGridPtr>(grid); }
  bool is_radial() const { return std::holds_alternative<RadialGridPtr>(grid); }

  const CartesianGrid& cart() const {
    if (!is_cartesian()) throw FieldError("expected a cartesian field");
    return *std::get<CartesianGridPtr>(grid);
  }
  const RadialGrid& rad() const {
    if (!is_radial()) throw FieldError("expected a radial field");
    return *std::get<RadialGridPtr>(grid);
  }
  CartesianGridPtr cart_ptr() const { return std::get<CartesianGridPtr>(grid); }
  RadialGridPtr rad_ptr() const { return std::get<RadialGridPtr>(grid); }

  int dim() const { return is_cartesian() ? cart().dim() : rad().dim(); }
  std::size_t size() const { return values.size(); }

  bool all_finite() const {
    for (const auto& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

inline Field make_zero(CartesianGridPtr g, std::string tag = "zero") {
  Field f;
  f.grid = g;
  f.values.assign(g->size(), Complex(0.0, 0.0));
  f.tag = std::move(tag);
  return f;
}

inline Field make_zero(RadialGridPtr g, std::string tag = "zero") {
  Field f;
  f.grid = g;
  f.values.assign(g->size(), Complex(0.0, 0.0));
  f.tag = std::move(tag);
  return f;
}

// Sample a function of position on a cartesian grid.
inline Field make_cartesian(CartesianGridPtr g,
                            const std::function<Complex(const std::array<double, 3>&)>& fn,
                            std::string tag = "sampled") {
  Field f;
  f.grid = g;
  f.values.resize(g->size());
  f.tag = std::move(tag);
  std::array<int, 3> ijk;
  std::array<double, 3> x;
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    g->unflatten(idx, ijk);
    g->point(ijk, x);
    f.values[idx] = fn(x);
  }
  return f;
}

inline Field make_radial(RadialGridPtr g, const std::function<Complex(double)>& fn,
                         std::string tag = "sampled") {
  Field f;
  f.grid = g;
  f.values.resize(g->size());
  f.tag = std::move(tag);
  for (int i = 0; i < g->n_nodes(); ++i) f.values[i] = fn(g->nodes()[i]);
  return f;
}

inline void require_same_grid(const Field& a, const Field& b) {
  if (a.is_cartesian() != b.is_cartesian()) throw FieldError("grid kind mismatch");
  if (a.is_cartesian()) {
    if (!a.cart().same_as(b.cart())) throw FieldError("cartesian grid mismatch");
  } else {
    if (!a.rad().same_as(b.rad())) throw FieldError("radial grid mismatch");
  }
}

}  // namespace nls
