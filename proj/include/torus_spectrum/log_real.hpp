#ifndef TORUS_SPECTRUM_LOG_REAL_HPP
#define TORUS_SPECTRUM_LOG_REAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace torus_spectrum {

/// A real number stored as sign and natural log of its magnitude.
/// Morrey weights and block sizes leave double range after a few dozen terms.
struct LogReal {
  int sign = 0;  // -1, 0 or +1
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static LogReal zero() { return {}; }
  static LogReal from_log(double log_mag, int s = 1) {
    if (s == 0 || log_mag == -std::numeric_limits<double>::infinity()) return zero();
    return {s > 0 ? 1 : -1, log_mag};
  }
  static LogReal from_double(double v) {
    if (v == 0.0) return zero();
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
  }

  bool is_zero() const { return sign == 0; }

  /// May overflow to +-inf.
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }

  /// Decimal log of |value|; -inf for zero.
  double log10_magnitude() const {
    return sign == 0 ? -std::numeric_limits<double>::infinity()
                     : log_magnitude / std::numbers::ln10;
  }

  friend LogReal operator*(LogReal a, LogReal b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.sign * b.sign, a.log_magnitude + b.log_magnitude};
  }
  friend LogReal operator/(LogReal a, LogReal b) {
    if (a.is_zero()) return zero();
    return {a.sign * b.sign, a.log_magnitude - b.log_magnitude};
  }

  /// Sum of two nonnegative values via log-sum-exp.
  friend LogReal operator+(LogReal a, LogReal b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_magnitude, b.log_magnitude);
    const double lo = std::min(a.log_magnitude, b.log_magnitude);
    if (a.sign > 0 && b.sign > 0) return {1, hi + std::log1p(std::exp(lo - hi))};
    // mixed signs are not needed anywhere; fall back to doubles
    return from_double(a.value() + b.value());
  }

  friend bool operator<(LogReal a, LogReal b) {
    if (a.sign != b.sign) return a.sign < b.sign;
    if (a.sign == 0) return false;
    return a.sign > 0 ? a.log_magnitude < b.log_magnitude : a.log_magnitude > b.log_magnitude;
  }
  friend bool operator<=(LogReal a, LogReal b) { return !(b < a); }
};

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_LOG_REAL_HPP
