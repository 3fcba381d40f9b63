#pragma once

// Discrete Fourier transforms on cartesian grids, backed by FFTW.
//
// SpectralField stores Fourier-series coefficients u_hat such that
//   u(x_j) = sum_k u_hat(k) exp(i k . x_j)   exactly on the grid,
// i.e. u_hat = FFTW_FORWARD(u) / N. With this convention multiplier
// operators (free propagator, derivatives, translations) act diagonally.
//
// Thread contract: plan creation is serialized behind a mutex (the FFTW
// planner is not thread-safe); plan execution uses the new-array interface
// on caller buffers and is safe concurrently.

#include <fftw3.h>

#include <map>
#include <mutex>

#include "nls/field.hpp"

namespace nls {

struct SpectralField {
  CartesianGridPtr grid;
  std::vector<Complex> coeffs;  // u_hat, FFTW index order per axis
  std::size_t size() const { return coeffs.size(); }
};

class Transform {
 public:
  explicit Transform(CartesianGridPtr grid) : grid_(std::move(grid)) {
    const int n = grid_->points_per_axis();
    int dims[3] = {n, n, n};
    std::size_t total = grid_->size();
    in_ = fftw_alloc_complex(total);
    out_ = fftw_alloc_complex(total);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft(grid_->dim(), dims, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(grid_->dim(), dims, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw GridError("fftw plan creation failed");
  }

  ~Transform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }

  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  const CartesianGrid& grid() const { return *grid_; }
  CartesianGridPtr grid_ptr() const { return grid_; }

  // u -> u_hat (normalized by 1/N)
  void forward(const std::vector<Complex>& u, std::vector<Complex>& uhat) const {
    check_alignment(u);
    uhat.resize(u.size());
    execute(fwd_, u, uhat);
    double inv_n = 1.0 / static_cast<double>(u.size());
    for (auto& c : uhat) c *= inv_n;
  }

  // u_hat -> u
  void inverse(const std::vector<Complex>& uhat, std::vector<Complex>& u) const {
    check_alignment(uhat);
    u.resize(uhat.size());
    execute(bwd_, uhat, u);
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  void execute(fftw_plan plan, const std::vector<Complex>& in,
               std::vector<Complex>& out) const {
    // new-array execution; in is not modified for out-of-place c2c plans
    auto* ip = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
    auto* op = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, ip, op);
  }

  void check_alignment(const std::vector<Complex>& v) const {
    // plans were created on fftw_malloc'd buffers; glibc guarantees 16-byte
    // alignment for operator new, which matches what the planner assumed
    if (fftw_alignment_of(reinterpret_cast<double*>(const_cast<Complex*>(v.data()))) !=
        fftw_alignment_of(reinterpret_cast<double*>(in_)))
      throw FieldError("buffer alignment incompatible with fft plan");
  }

  CartesianGridPtr grid_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

// Process-wide plan cache keyed by the full grid signature (the box size
// matters: consumers read wavenumbers off Transform::grid()). Execution on
// cached plans is concurrent-safe; creation is serialized.
inline std::shared_ptr<const Transform> get_transform(CartesianGridPtr grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const Transform>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(grid->dim(), grid->points_per_axis(), grid->box_half_length());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const Transform>(grid);
  cache.emplace(key, t);
  return t;
}

inline SpectralField forward_transform(const Field& u) {
  if (!u.is_cartesian()) throw FieldError("forward_transform needs a cartesian field");
  SpectralField s;
  s.grid = u.cart_ptr();
  get_transform(s.grid)->forward(u.values, s.coeffs);
  return s;
}

inline Field inverse_transform(const SpectralField& s, std::string tag = "inverse") {
  Field f;
  f.grid = s.grid;
  f.tag = std::move(tag);
  get_transform(s.grid)->inverse(s.coeffs, f.values);
  return f;
}

// ---------------------------------------------------------------------------
// Diagonal multiplier helpers
// ---------------------------------------------------------------------------

template <class Fn>
inline void apply_multiplier(SpectralField& s, Fn&& mult) {
  const CartesianGrid& g = *s.grid;
  std::array<int, 3> ijk;
  std::array<double, 3> k;
  for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
    g.unflatten(idx, ijk);
    g.wavevector(ijk, k);
    s.coeffs[idx] *= mult(k);
  }
}

// exp(i t Delta): u_hat(k) -> exp(-i |k|^2 t) u_hat(k)
inline Field free_propagate(const Field& u, double t) {
  SpectralField s = forward_transform(u);
  apply_multiplier(s, [t](const std::array<double, 3>& k) {
    double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    return std::polar(1.0, -k2 * t);
  });
  return inverse_transform(s, "free_propagated");
}

// u(. - shift) via the exact Fourier phase shift
inline Field translate(const Field& u, const std::array<double, 3>& shift) {
  SpectralField s = forward_transform(u);
  apply_multiplier(s, [&shift](const std::array<double, 3>& k) {
    double kx = k[0] * shift[0] + k[1] * shift[1] + k[2] * shift[2];
    return std::polar(1.0, -kx);
  });
  return inverse_transform(s, "translated");
}

// partial_a u for one axis, as a real-space field
inline Field spectral_derivative(const SpectralField& s, int axis) {
  SpectralField ds = s;
  apply_multiplier(ds, [axis](const std::array<double, 3>& k) {
    return Complex(0.0, k[axis]);
  });
  return inverse_transform(ds, "derivative");
}

}  // namespace nls
