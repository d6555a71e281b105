#ifndef TORUS_SPECTRUM_SAMPLING_HPP
#define TORUS_SPECTRUM_SAMPLING_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/parallel.hpp"
#include "torus_spectrum/random.hpp"
#include "torus_spectrum/statistics.hpp"

namespace torus_spectrum {

/// Uniform point of `sub`, truncated at `dim` coordinates. Indices beyond the
/// horizon are drawn uniformly under a free tail and left at 0 otherwise.
inline TorusPoint sample_point(const SubtorusSpec& sub, RandomStream& rng, std::size_t dim) {
  TorusPoint x(dim);
  const std::size_t h = std::min(dim, sub.horizon());
  for (std::size_t i = 1; i <= h; ++i) {
    if (!sub.is_free(i)) x.set(i, sub.fixed_value(i));
  }
  for (std::size_t i : sub.free()) {
    if (i > dim) break;
    x.set(i, rng.uniform());
  }
  if (sub.tail() == TailPolicy::free_with_tail_bound) {
    for (std::size_t i = sub.horizon() + 1; i <= dim; ++i) x.set(i, rng.uniform());
  }
  return x;
}

inline TorusPoint sample_point(const SubtorusSpec& sub, RandomStream& rng) {
  return sample_point(sub, rng, sub.horizon());
}

/// Uniform sample from {v in R^dim : ||v||_p <= radius}.
///
/// Coordinates are drawn from the density proportional to exp(-|t|^p)
/// (a signed Gamma(1/p)^(1/p) variate), normalised onto the unit sphere, which
/// yields the cone measure; scaling by radius * U^(1/dim) makes it uniform in
/// the ball. For p = inf the coordinates are just uniform on [-radius, radius].
inline std::vector<double> sample_lp_ball(std::size_t dim, double radius, const DualExponent& d,
                                          RandomStream& rng) {
  if (!(radius > 0.0)) throw ValidationError("sample_lp_ball: radius must be positive");
  std::vector<double> v(dim);
  if (dim == 0) return v;
  if (d.is_infinite()) {
    for (double& x : v) x = radius * (2.0 * rng.uniform() - 1.0);
    return v;
  }
  const double p = d.p();
  double norm_p = 0.0;
  do {
    norm_p = 0.0;
    for (double& x : v) {
      const double g = rng.gamma(1.0 / p);
      x = std::pow(g, 1.0 / p);
      if (rng.uniform() < 0.5) x = -x;
      norm_p += g;  // |x|^p
    }
  } while (norm_p == 0.0);
  const double scale = radius * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(dim)) /
                       std::pow(norm_p, 1.0 / p);
  for (double& x : v) x *= scale;
  return v;
}

/// Independent route to the same law: rejection from the cube [-r, r]^dim.
/// Acceptance decays fast with dim, so keep dim small. Accepts p >= 1.
inline std::vector<double> sample_lp_ball_rejection(std::size_t dim, double radius, double p,
                                                    RandomStream& rng) {
  if (!(radius > 0.0)) throw ValidationError("sample_lp_ball_rejection: radius must be positive");
  if (dim > 8) throw ValidationError("sample_lp_ball_rejection: dim must be <= 8");
  std::vector<double> v(dim);
  for (;;) {
    double s = 0.0;
    for (double& x : v) {
      x = 2.0 * rng.uniform() - 1.0;
      s = std::isinf(p) ? std::max(s, std::abs(x)) : s + std::pow(std::abs(x), p);
    }
    if (s <= 1.0) break;
  }
  for (double& x : v) x *= radius;
  return v;
}

/// l_p norm of a vector in R^n (sup norm for p = inf).
inline double lp_norm(const std::vector<double>& v, double p) {
  double s = 0.0;
  if (std::isinf(p)) {
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
  }
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

struct MCOptions {
  unsigned workers = 1;
  // Abort when more than this fraction of evaluations is non-finite.
  double max_non_finite_fraction = 0.01;
  // Coordinates per sampled point; 0 means the subtorus horizon.
  std::size_t dim = 0;
};

/// Sample mean of g over uniform points of `sub`. Sample j draws from
/// rng.substream(j), so the result is independent of `workers`.
inline MCEstimate mc_integral(const std::function<double(const TorusPoint&)>& g, const SubtorusSpec& sub,
                              std::size_t samples, const RandomStream& rng, const MCOptions& options = {}) {
  if (samples == 0) throw ValidationError("mc_integral: samples must be positive");
  const std::size_t dim = options.dim == 0 ? sub.horizon() : options.dim;
  std::vector<MCEstimate> partial(std::max(1u, options.workers));
  parallel_for(samples, options.workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    for (std::size_t j = begin; j < end; ++j) {
      RandomStream s = rng.substream(j);
      partial[w].add(g(sample_point(sub, s, dim)));
    }
  });
  MCEstimate total;
  for (const auto& e : partial) total.merge(e);
  if (static_cast<double>(total.non_finite()) > options.max_non_finite_fraction * static_cast<double>(samples)) {
    throw ValidationError("mc_integral: " + std::to_string(total.non_finite()) + " of " +
                          std::to_string(samples) + " evaluations were not finite");
  }
  return total;
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_SAMPLING_HPP
