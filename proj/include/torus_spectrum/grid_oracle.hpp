#ifndef TORUS_SPECTRUM_GRID_ORACLE_HPP
#define TORUS_SPECTRUM_GRID_ORACLE_HPP

// Brute-force oscillation bracket: evaluate on a regular grid of the free
// coordinates (at most 4 of them), then widen by the Lipschitz slack.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/function.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/parallel.hpp"

namespace torus_spectrum {

struct OscBracket {
  double lower = 0.0;  // max - min over grid nodes
  double upper = 0.0;  // lower + 2 L * (l_p diameter of one grid cell)
};

inline constexpr std::size_t kMaxGridOracleDim = 4;
inline constexpr double kMaxGridOraclePoints = 1e8;

/// Oscillation bracket of f over the free coordinates of `sub` (tail pinned).
inline OscBracket grid_oracle_osc(const TorusFunction& f, const SubtorusSpec& sub,
                                  const std::vector<std::size_t>& resolution, const DualExponent& d,
                                  unsigned workers = 1) {
  const std::vector<std::size_t>& free = sub.free();
  const std::size_t n = free.size();
  if (n > kMaxGridOracleDim) {
    throw ValidationError("grid oracle: at most " + std::to_string(kMaxGridOracleDim) + " free coordinates (got " +
                          std::to_string(n) + ")");
  }
  if (resolution.size() != n) throw ValidationError("grid oracle: need one resolution per free coordinate");
  double total = 1.0;
  for (std::size_t r : resolution) {
    if (r == 0) throw ValidationError("grid oracle: resolution must be positive");
    total *= static_cast<double>(r);
  }
  if (total > kMaxGridOraclePoints) {
    throw ValidationError("grid oracle: resolution gives " + std::to_string(total) + " points (limit 1e8)");
  }
  const auto points = static_cast<std::size_t>(total);
  // the tail is pinned, so nothing past min(support, horizon) matters
  const std::size_t dim = std::min(f.support(), sub.horizon());
  const TorusPoint base = [&] {
    TorusPoint b(dim);
    for (std::size_t i = 1; i <= std::min(dim, sub.horizon()); ++i) {
      if (!sub.is_free(i)) b.set(i, sub.fixed_value(i));
    }
    return b;
  }();

  std::vector<double> lo(std::max(1u, workers), std::numeric_limits<double>::infinity());
  std::vector<double> hi(lo.size(), -std::numeric_limits<double>::infinity());
  parallel_for(points, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    TorusPoint x = base;
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      for (std::size_t j = n; j-- > 0;) {
        const std::size_t k = rest % resolution[j];
        rest /= resolution[j];
        if (free[j] <= dim) x.set(free[j], static_cast<double>(k) / static_cast<double>(resolution[j]));
      }
      const double v = f.eval(x);
      lo[w] = std::min(lo[w], v);
      hi[w] = std::max(hi[w], v);
    }
  });
  const double vmin = *std::min_element(lo.begin(), lo.end());
  const double vmax = *std::max_element(hi.begin(), hi.end());

  double diam = 0.0;
  for (std::size_t r : resolution) {
    const double h = 1.0 / static_cast<double>(r);
    diam = d.is_infinite() ? std::max(diam, h) : diam + std::pow(h, d.p());
  }
  if (!d.is_infinite()) diam = std::pow(diam, 1.0 / d.p());
  if (n == 0) diam = 0.0;

  const double lower = vmax - vmin;
  const double lip = f.lipschitz_constant(d);
  return {lower, lower + 2.0 * lip * diam};
}

/// Bracket over T^n (coordinates past n pinned at 0).
inline OscBracket grid_oracle_osc(const TorusFunction& f, std::size_t n, const std::vector<std::size_t>& resolution,
                                  const DualExponent& d, unsigned workers = 1) {
  return grid_oracle_osc(f, SubtorusSpec::full(n), resolution, d, workers);
}

/// Largest uniform per-axis resolution with at most `budget` grid points.
inline std::size_t uniform_resolution(std::size_t n, double budget) {
  if (n == 0) return 1;
  auto r = static_cast<std::size_t>(std::floor(std::pow(budget, 1.0 / static_cast<double>(n)) + 1e-9));
  while (r > 1 && std::pow(static_cast<double>(r), static_cast<double>(n)) > budget) --r;
  return std::max<std::size_t>(r, 1);
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_GRID_ORACLE_HPP
