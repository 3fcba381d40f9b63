#pragma once

// Spatial grids.
//
// CartesianGrid: periodic box [-L, L)^d, n points per axis (power of two),
// Fourier modes k_j = (pi/L) m_j with m_j in {-n/2, ..., n/2 - 1}.
//
// RadialGrid: uniform nodes on [0, r_max] with quadrature weights such that
//   integral_{R^d} f(|x|) dx  ~=  sum_i w_i f(r_i).
// The weights are Gregory-corrected trapezoid weights applied to
// f(r) |S^{d-1}| r^{d-1}; the correction makes the rule exact for cubic
// integrands, so the ball-volume identity holds to roundoff. The r = 0
// node carries zero weight for d >= 2 through the r^{d-1} factor.

#include <algorithm>
#include <array>
#include <memory>
#include <vector>

#include "nls/params.hpp"

namespace nls {

class CartesianGrid {
 public:
  static std::shared_ptr<const CartesianGrid> create(int d, int n, double box_half_length) {
    if (d < 1 || d > 3) throw GridError("cartesian grid dimension must be 1, 2 or 3");
    if (n < 16 || !is_power_of_two(n))
      throw GridError("points per axis must be a power of two >= 16");
    if (!(box_half_length > 0.0)) throw GridError("box half-length must be positive");
    return std::shared_ptr<const CartesianGrid>(new CartesianGrid(d, n, box_half_length));
  }

  int dim() const { return d_; }
  int points_per_axis() const { return n_; }
  double box_half_length() const { return L_; }
  double spacing() const { return h_; }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < d_; ++a) s *= static_cast<std::size_t>(n_);
    return s;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < d_; ++a) v *= h_;
    return v;
  }

  double volume() const {
    double v = 1.0;
    for (int a = 0; a < d_; ++a) v *= 2.0 * L_;
    return v;
  }

  double coord(int i) const { return -L_ + h_ * i; }

  // k = (pi/L) m, m in {-n/2, ..., n/2-1}, FFTW index order
  double wavenumber(int i) const {
    int m = (i < n_ / 2) ? i : i - n_;
    return pi / L_ * m;
  }

  // flat index <-> per-axis indices (row-major, axis 0 slowest)
  void unflatten(std::size_t idx, std::array<int, 3>& ijk) const {
    ijk = {0, 0, 0};
    for (int a = d_ - 1; a >= 0; --a) {
      ijk[a] = static_cast<int>(idx % n_);
      idx /= n_;
    }
  }

  void point(const std::array<int, 3>& ijk, std::array<double, 3>& x) const {
    x = {0.0, 0.0, 0.0};
    for (int a = 0; a < d_; ++a) x[a] = coord(ijk[a]);
  }

  void wavevector(const std::array<int, 3>& ijk, std::array<double, 3>& k) const {
    k = {0.0, 0.0, 0.0};
    for (int a = 0; a < d_; ++a) k[a] = wavenumber(ijk[a]);
  }

  bool same_as(const CartesianGrid& o) const {
    return d_ == o.d_ && n_ == o.n_ && L_ == o.L_;
  }

 private:
  CartesianGrid(int d, int n, double L) : d_(d), n_(n), L_(L), h_(2.0 * L / n) {}
  int d_;
  int n_;
  double L_;
  double h_;
};

class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> create(int d, int n_nodes, double r_max) {
    if (d < 1 || d > 3) throw GridError("radial grid dimension must be 1, 2 or 3");
    if (n_nodes < 16 || !is_power_of_two(n_nodes))
      throw GridError("radial node count must be a power of two >= 16");
    if (!(r_max > 0.0)) throw GridError("r_max must be positive");
    return std::shared_ptr<const RadialGrid>(new RadialGrid(d, n_nodes, r_max));
  }

  int dim() const { return d_; }
  int n_nodes() const { return n_; }
  double r_max() const { return r_max_; }
  double spacing() const { return h_; }
  std::size_t size() const { return static_cast<std::size_t>(n_); }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  bool same_as(const RadialGrid& o) const {
    return d_ == o.d_ && n_ == o.n_ && r_max_ == o.r_max_;
  }

 private:
  RadialGrid(int d, int n, double r_max)
      : d_(d), n_(n), r_max_(r_max), h_(r_max / (n - 1)) {
    nodes_.resize(n_);
    weights_.resize(n_);
    for (int i = 0; i < n_; ++i) nodes_[i] = h_ * i;
    // Gregory end corrections: [3/8, 7/6, 23/24, 1, ..., 1, 23/24, 7/6, 3/8]
    double surf = surface_area_unit_sphere(d_);
    for (int i = 0; i < n_; ++i) {
      double c = 1.0;
      int j = std::min(i, n_ - 1 - i);
      if (j == 0) c = 3.0 / 8.0;
      else if (j == 1) c = 7.0 / 6.0;
      else if (j == 2) c = 23.0 / 24.0;
      double rpow = 1.0;
      for (int a = 0; a < d_ - 1; ++a) rpow *= nodes_[i];
      weights_[i] = surf * c * h_ * rpow;
    }
  }

  int d_;
  int n_;
  double r_max_;
  double h_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace nls
