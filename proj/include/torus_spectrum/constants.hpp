#ifndef TORUS_SPECTRUM_CONSTANTS_HPP
#define TORUS_SPECTRUM_CONSTANTS_HPP

// Volumes of unit l_p balls, the Morrey weights
//
//     c(eps, p, i) = 2^((i-1)^2 + q(i-1)) / (omega(i-1, p) * eps^(i-1+q))
//
// and the block sizes ceil(2^(n+1) * c(eps, p, n)). Everything is evaluated
// in log space; doubles are produced only where they are representable.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/log_real.hpp"

namespace torus_spectrum {

/// log of the volume of the unit l_p ball in R^n:
///   (2 Gamma(1 + 1/p))^n / Gamma(1 + n/p).
/// Accepts p >= 1 (p = 1 is a valid ball even though it is not a valid metric exponent).
inline double lp_ball_log_volume(unsigned n, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw ValidationError("ball exponent must satisfy p >= 1 (got " + std::to_string(p) + ")");
  }
  if (n == 0) return 0.0;
  if (std::isinf(p)) return n * std::numbers::ln2;  // the cube [-1, 1]^n
  const double inv = 1.0 / p;
  return n * (std::numbers::ln2 + std::lgamma(1.0 + inv)) - std::lgamma(1.0 + n * inv);
}

inline LogReal lp_ball_volume(unsigned n, double p) {
  return LogReal::from_log(lp_ball_log_volume(n, p));
}

inline LogReal lp_ball_volume(unsigned n, const DualExponent& d) {
  return lp_ball_volume(n, d.p());
}

namespace detail {
inline void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw ValidationError("eps must lie in (0, 1/2) (got " + std::to_string(eps) + ")");
  }
}
}  // namespace detail

/// c(eps, p, i) for i >= 1. The same constant weights d/dx_{i} in the
/// infinite-torus form and d/dx_{i+1} (offset index i-1) in the finite-torus form.
inline LogReal morrey_weight(unsigned i, double eps, const DualExponent& d) {
  if (i == 0) throw ValidationError("morrey_weight: index starts at 1");
  detail::check_eps(eps);
  const double k = i - 1.0;
  const double q = d.q();
  const double log_num = (k * k + q * k) * std::numbers::ln2;
  const double log_den = lp_ball_log_volume(i - 1, d.p()) + (k + q) * std::log(eps);
  return LogReal::from_log(log_num - log_den);
}

struct BlockSize {
  LogReal raw;  // the quantity under the ceiling
  std::optional<std::uint64_t> count;  // set when the ceiling fits in 2^53

  LogReal log_count() const {
    return count ? LogReal::from_double(static_cast<double>(*count)) : raw;
  }
};

/// #(B_n) = ceil(2^((n-1)^2 + q(n-1) + (n+1)) / (omega(n-1, p) eps^(n-1+q))).
inline BlockSize block_size(unsigned n, double eps, const DualExponent& d) {
  if (n == 0) throw ValidationError("block_size: block index starts at 1");
  const LogReal raw = morrey_weight(n, eps, d) * LogReal::from_log((n + 1.0) * std::numbers::ln2);
  BlockSize out{raw, std::nullopt};
  constexpr double kExactLimit = 9007199254740992.0;  // 2^53
  if (raw.log_magnitude < std::log(kExactLimit)) {
    const double v = raw.value();
    // Decimal eps (0.4, 0.1, ...) lands a few ulps off integers; a value that
    // is an integer up to rounding noise is taken as that integer.
    const double nearest = std::round(v);
    const double c = std::abs(v - nearest) <= 1e-11 * std::max(1.0, v) ? nearest : std::ceil(v);
    if (c < kExactLimit) out.count = static_cast<std::uint64_t>(std::max(1.0, c));
  }
  return out;
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_CONSTANTS_HPP
