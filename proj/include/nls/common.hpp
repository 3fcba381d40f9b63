#pragma once

// Shared utilities: error types, logging, compensated summation, fast
// half-integer powers. Everything downstream includes this header.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace nls {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Error types. Each category maps to a CLI exit code (see tools/nlslab.cpp).
// ---------------------------------------------------------------------------

struct InvalidParameter : std::runtime_error {
  explicit InvalidParameter(const std::string& what) : std::runtime_error(what) {}
};

struct GridError : std::runtime_error {
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

struct FieldError : std::runtime_error {
  explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

struct SupportOverflow : std::runtime_error {
  explicit SupportOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Logging. Level comes from NLS_LOG_LEVEL in {error, warn, info, debug}.
// ---------------------------------------------------------------------------

enum class LogLevel : int { error = 0, warn = 1, info = 2, debug = 3 };

namespace detail {
inline LogLevel parse_log_level(const char* s) {
  if (!s) return LogLevel::warn;
  std::string v(s);
  if (v == "error") return LogLevel::error;
  if (v == "warn") return LogLevel::warn;
  if (v == "info") return LogLevel::info;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::warn;
}
}  // namespace detail

inline LogLevel& log_level() {
  static LogLevel level = detail::parse_log_level(std::getenv("NLS_LOG_LEVEL"));
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

inline void log_info(const std::string& msg) { log(LogLevel::info, msg); }
inline void log_warn(const std::string& msg) { log(LogLevel::warn, msg); }
inline void log_debug(const std::string& msg) { log(LogLevel::debug, msg); }

// ---------------------------------------------------------------------------
// Compensated (Kahan) summation. Quadrature identities are asserted at
// 1e-12 relative, which a naive sum over ~1e6 terms does not reliably hit.
// ---------------------------------------------------------------------------

class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// |z|^q evaluated from |z|^2, with exact fast paths for the integer and
// half-integer exponents that dominate the functional evaluations
// (q = 2, p+1, 2(d+2)/d all land there for the stock parameter points).
inline double pow_abs2(double abs2, double q) {
  if (abs2 == 0.0) return 0.0;
  double half = 0.5 * q;  // |z|^q = (|z|^2)^(q/2)
  double r = std::round(half);
  if (std::abs(half - r) < 1e-12 && r >= 0.0 && r <= 32.0) {
    double acc = 1.0;
    double base = abs2;
    auto e = static_cast<unsigned>(r);
    while (e) {
      if (e & 1u) acc *= base;
      base *= base;
      e >>= 1u;
    }
    return acc;
  }
  double r2 = std::round(q);
  if (std::abs(q - r2) < 1e-12 && r2 >= 0.0 && r2 <= 64.0) {
    // odd integer q: (|z|^2)^((q-1)/2) * |z|
    double acc = 1.0;
    double base = abs2;
    auto e = static_cast<unsigned>((r2 - 1.0) / 2.0);
    while (e) {
      if (e & 1u) acc *= base;
      base *= base;
      e >>= 1u;
    }
    return acc * std::sqrt(abs2);
  }
  return std::pow(abs2, half);
}

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace nls
