#ifndef TORUS_SPECTRUM_FUNCTION_HPP
#define TORUS_SPECTRUM_FUNCTION_HPP

// Functions on the (truncated) torus: the evaluation/derivative contract and
// two concrete families, cosine series with exact oracles and periodic
// multilinear grid interpolants as a black box.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/geometry.hpp"

namespace torus_spectrum {

inline constexpr std::size_t kUnboundedSupport = std::numeric_limits<std::size_t>::max();

class TorusFunction {
 public:
  virtual ~TorusFunction() = default;

  virtual std::string family() const = 0;
  virtual double eval(const TorusPoint& x) const = 0;
  /// d f / d x_i at x; at kinks, the one-sided derivative from the right.
  virtual double partial(std::size_t i, const TorusPoint& x) const = 0;
  /// Lipschitz constant with respect to dist_p.
  virtual double lipschitz_constant(const DualExponent& d) const = 0;
  /// Upper bound on the oscillation contributed by coordinates past `horizon`.
  virtual std::optional<double> tail_osc_bound(std::size_t horizon) const = 0;
  /// Largest index f depends on, or kUnboundedSupport.
  virtual std::size_t support() const = 0;
  virtual std::shared_ptr<const TorusFunction> scaled(double factor) const = 0;

  // Exact oracles. nullopt means "not available for this family / query".

  /// Integral of |d f / d x_i|^q over the torus, when it does not depend on the
  /// other coordinates.
  virtual std::optional<double> exact_partial_qnorm(std::size_t, const DualExponent&) const {
    return std::nullopt;
  }
  virtual std::optional<double> exact_osc(const SubtorusSpec&) const { return std::nullopt; }
  virtual std::optional<double> exact_mean(const SubtorusSpec&) const { return std::nullopt; }
};

using FunctionPtr = std::shared_ptr<const TorusFunction>;

/// Number of coordinates worth materialising to evaluate f on `sub`.
inline std::size_t evaluation_dim(const TorusFunction& f, const SubtorusSpec& sub) {
  const std::size_t s = f.support();
  // coordinates past the support never change f
  if (sub.tail() == TailPolicy::fixed_at_base || s == kUnboundedSupport) return std::min(s, sub.horizon());
  return s;
}

namespace detail {

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 60);
}

}  // namespace detail

/// m_q = integral over [0, 1] of |sin(2 pi t)|^q, by adaptive Simpson on a
/// quarter period. Cached per q.
inline double sine_abs_moment(double q) {
  if (!(q >= 1.0) || std::isinf(q)) throw ValidationError("sine_abs_moment: q must be finite and >= 1");
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(q); it != cache.end()) return it->second;
  }
  const auto g = [q](double t) { return std::pow(std::sin(2.0 * std::numbers::pi * t), q); };
  const double m = 4.0 * detail::integrate(g, 0.0, 0.25, 2.5e-14);
  std::lock_guard lock(mutex);
  cache.emplace(q, m);
  return m;
}

/// a_i = scale * ratio^i for every i > from.
struct GeometricTail {
  double ratio = 0.0;
  std::size_t from = 0;
  double scale = 1.0;
};

/// f(x) = offset + sum_i a_i cos(2 pi (x_i + phase_i)), optionally with a
/// geometric tail of coefficients past the explicit list.
class CosineSeries final : public TorusFunction {
 public:
  CosineSeries(std::vector<double> coeffs, std::vector<double> phases = {}, double offset = 0.0,
               std::optional<GeometricTail> tail = std::nullopt)
      : coeffs_(std::move(coeffs)), phases_(std::move(phases)), offset_(offset), tail_(tail) {
    if (!phases_.empty() && phases_.size() != coeffs_.size()) {
      throw ValidationError("cosine series: phases must match coefficients in length");
    }
    for (double& ph : phases_) ph = TorusCoordinate::wrap(ph);
    for (double a : coeffs_) {
      if (!std::isfinite(a)) throw ValidationError("cosine series: coefficients must be finite");
    }
    if (!std::isfinite(offset_)) throw ValidationError("cosine series: offset must be finite");
    if (tail_) {
      // sum a_i^2 < inf, the a.e.-convergence condition for the series
      if (!(std::abs(tail_->ratio) < 1.0)) {
        throw ValidationError("cosine series: geometric tail needs |ratio| < 1 for square-summable coefficients");
      }
      if (tail_->from < coeffs_.size()) {
        throw ValidationError("cosine series: tail must start at or after the explicit coefficients");
      }
      if (!std::isfinite(tail_->scale)) throw ValidationError("cosine series: tail scale must be finite");
    }
  }

  std::string family() const override { return "cosine"; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<double>& phases() const { return phases_; }
  double offset() const { return offset_; }
  const std::optional<GeometricTail>& tail() const { return tail_; }

  double coefficient(std::size_t i) const {
    if (i >= 1 && i <= coeffs_.size()) return coeffs_[i - 1];
    if (tail_ && i > tail_->from) return tail_->scale * std::pow(tail_->ratio, static_cast<double>(i));
    return 0.0;
  }
  double phase(std::size_t i) const { return i >= 1 && i <= phases_.size() ? phases_[i - 1] : 0.0; }

  double eval(const TorusPoint& x) const override {
    double s = offset_;
    for (std::size_t i = 1; i <= coeffs_.size(); ++i) {
      if (coeffs_[i - 1] != 0.0) s += coeffs_[i - 1] * std::cos(2.0 * std::numbers::pi * (x.value(i) + phase(i)));
    }
    if (tail_) {
      // explicit coordinates, then the rest at 0 where cos = 1
      for (std::size_t i = tail_->from + 1; i <= x.dim(); ++i) {
        s += coefficient(i) * std::cos(2.0 * std::numbers::pi * x.value(i));
      }
      s += tail_signed_sum(std::max(x.dim(), tail_->from));
    }
    return s;
  }

  double partial(std::size_t i, const TorusPoint& x) const override {
    const double a = coefficient(i);
    if (a == 0.0) return 0.0;
    return -2.0 * std::numbers::pi * a * std::sin(2.0 * std::numbers::pi * (x.value(i) + phase(i)));
  }

  /// 2 pi ||a||_q, q the dual exponent.
  double lipschitz_constant(const DualExponent& d) const override {
    const double q = d.q();
    double s = 0.0;
    for (double a : coeffs_) s += std::pow(std::abs(a), q);
    if (tail_ && tail_->scale != 0.0 && tail_->ratio != 0.0) {
      const double r = std::abs(tail_->ratio);
      s += std::pow(std::abs(tail_->scale), q) * std::pow(r, q * (tail_->from + 1.0)) / (1.0 - std::pow(r, q));
    }
    return 2.0 * std::numbers::pi * std::pow(s, 1.0 / q);
  }

  /// 2 * sum_{i > horizon} |a_i|.
  std::optional<double> tail_osc_bound(std::size_t horizon) const override {
    double s = 0.0;
    for (std::size_t i = horizon + 1; i <= coeffs_.size(); ++i) s += std::abs(coeffs_[i - 1]);
    if (tail_) s += tail_abs_sum(std::max(horizon, tail_->from));
    return 2.0 * s;
  }

  std::size_t support() const override {
    if (tail_ && tail_->scale != 0.0 && tail_->ratio != 0.0) return kUnboundedSupport;
    std::size_t s = coeffs_.size();
    while (s > 0 && coeffs_[s - 1] == 0.0) --s;
    return s;
  }

  std::shared_ptr<const TorusFunction> scaled(double factor) const override {
    std::vector<double> c = coeffs_;
    for (double& a : c) a *= factor;
    std::optional<GeometricTail> t = tail_;
    if (t) t->scale *= factor;
    return std::make_shared<CosineSeries>(std::move(c), phases_, offset_ * factor, t);
  }

  /// |2 pi a_i|^q * m_q.
  std::optional<double> exact_partial_qnorm(std::size_t i, const DualExponent& d) const override {
    const double a = coefficient(i);
    if (a == 0.0) return 0.0;
    return std::pow(2.0 * std::numbers::pi * std::abs(a), d.q()) * sine_abs_moment(d.q());
  }

  /// Each cosine reaches +-|a_i| independently: 2 sum_{free} |a_i|, plus the
  /// tail bound under a free tail.
  std::optional<double> exact_osc(const SubtorusSpec& sub) const override {
    double s = 0.0;
    const std::size_t sup = support();
    for (std::size_t i : sub.free()) {
      if (i > sup) break;
      s += std::abs(coefficient(i));
    }
    double osc = 2.0 * s;
    if (sub.tail() == TailPolicy::free_with_tail_bound) osc += *tail_osc_bound(sub.horizon());
    return osc;
  }

  /// Free cosines average to 0; pinned ones contribute a_i cos(2 pi (b_i + phase_i)).
  std::optional<double> exact_mean(const SubtorusSpec& sub) const override {
    double s = offset_;
    const std::size_t h = std::min(sub.horizon(), support());
    for (std::size_t i = 1; i <= h; ++i) {
      if (sub.is_free(i)) continue;
      const double a = coefficient(i);
      if (a != 0.0) s += a * std::cos(2.0 * std::numbers::pi * (sub.fixed_value(i) + phase(i)));
    }
    if (sub.tail() == TailPolicy::fixed_at_base) {
      for (std::size_t i = sub.horizon() + 1; i <= coeffs_.size(); ++i) {
        s += coeffs_[i - 1] * std::cos(2.0 * std::numbers::pi * phase(i));
      }
      if (tail_) s += tail_signed_sum(std::max(sub.horizon(), tail_->from));
    }
    return s;
  }

 private:
  // sum_{i > m} scale * r^i, m >= from
  double tail_signed_sum(std::size_t m) const {
    if (!tail_ || tail_->ratio == 0.0) return 0.0;
    return tail_->scale * std::pow(tail_->ratio, m + 1.0) / (1.0 - tail_->ratio);
  }
  double tail_abs_sum(std::size_t m) const {
    if (!tail_ || tail_->ratio == 0.0) return 0.0;
    const double r = std::abs(tail_->ratio);
    return std::abs(tail_->scale) * std::pow(r, m + 1.0) / (1.0 - r);
  }

  std::vector<double> coeffs_;
  std::vector<double> phases_;
  double offset_;
  std::optional<GeometricTail> tail_;
};

/// Periodic multilinear interpolant of values on a regular grid of T^n.
/// Values are row-major: the last axis varies fastest. Grid node k on axis j
/// sits at k / resolution[j].
class FiniteGridFunction final : public TorusFunction {
 public:
  FiniteGridFunction(std::vector<std::size_t> resolution, std::vector<double> values)
      : res_(std::move(resolution)), values_(std::move(values)) {
    if (res_.empty()) throw ValidationError("grid function: dimension must be at least 1");
    if (res_.size() > 16) throw ValidationError("grid function: dimension must be at most 16");
    std::size_t total = 1;
    for (std::size_t r : res_) {
      if (r == 0) throw ValidationError("grid function: resolution must be positive");
      total *= r;
    }
    if (values_.size() != total) {
      throw ValidationError("grid function: expected " + std::to_string(total) + " values, got " +
                            std::to_string(values_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw ValidationError("grid function: values must be finite");
    }
    strides_.assign(res_.size(), 1);
    for (std::size_t j = res_.size() - 1; j > 0; --j) strides_[j - 1] = strides_[j] * res_[j];
  }

  std::string family() const override { return "grid"; }
  std::size_t dim() const { return res_.size(); }
  const std::vector<std::size_t>& resolution() const { return res_; }
  const std::vector<double>& values() const { return values_; }

  double eval(const TorusPoint& x) const override {
    const Cell c = locate(x);
    return interpolate(c, res_.size());
  }

  double partial(std::size_t i, const TorusPoint& x) const override {
    if (i == 0 || i > res_.size()) return 0.0;
    const Cell c = locate(x);
    return static_cast<double>(res_[i - 1]) * (interpolate_pinned(c, i - 1, 1) - interpolate_pinned(c, i - 1, 0));
  }

  /// max over cells of || (max edge difference along axis j) * res_j ||_q.
  double lipschitz_constant(const DualExponent& d) const override {
    const std::size_t n = res_.size();
    const std::size_t corners = std::size_t{1} << n;
    double best = 0.0;
    std::vector<std::size_t> k(n, 0);
    std::vector<double> edge(n);
    for (std::size_t cell = 0; cell < values_.size(); ++cell) {
      std::fill(edge.begin(), edge.end(), 0.0);
      for (std::size_t mask = 0; mask < corners; ++mask) {
        const double v = node(k, mask);
        for (std::size_t j = 0; j < n; ++j) {
          if (mask & (std::size_t{1} << (n - 1 - j))) continue;
          const double w = node(k, mask | (std::size_t{1} << (n - 1 - j)));
          edge[j] = std::max(edge[j], std::abs(w - v) * static_cast<double>(res_[j]));
        }
      }
      double s = 0.0;
      for (double e : edge) s += d.is_infinite() ? e : std::pow(e, d.q());
      best = std::max(best, d.is_infinite() ? s : std::pow(s, 1.0 / d.q()));
      advance(k);
    }
    return best;
  }

  std::optional<double> tail_osc_bound(std::size_t) const override { return 0.0; }
  std::size_t support() const override { return res_.size(); }

  std::shared_ptr<const TorusFunction> scaled(double factor) const override {
    std::vector<double> v = values_;
    for (double& x : v) x *= factor;
    return std::make_shared<FiniteGridFunction>(res_, std::move(v));
  }

  /// Extremes of a multilinear interpolant sit on grid nodes, so the exact
  /// oscillation is available when every pinned axis is pinned to a node.
  std::optional<double> exact_osc(const SubtorusSpec& sub) const override {
    const std::size_t n = res_.size();
    std::vector<std::optional<std::size_t>> pinned(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (sub.is_free(j + 1)) continue;
      const double t = sub.fixed_value(j + 1) * static_cast<double>(res_[j]);
      const double r = std::round(t);
      if (std::abs(t - r) > 1e-9) return std::nullopt;
      pinned[j] = static_cast<std::size_t>(r) % res_[j];
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::vector<std::size_t> k(n, 0);
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
      bool on_slice = true;
      for (std::size_t j = 0; j < n && on_slice; ++j) on_slice = !pinned[j] || *pinned[j] == k[j];
      if (on_slice) {
        lo = std::min(lo, values_[idx]);
        hi = std::max(hi, values_[idx]);
      }
      advance(k);
    }
    return hi - lo;
  }

 private:
  struct Cell {
    std::vector<std::size_t> k;
    std::vector<double> frac;
  };

  Cell locate(const TorusPoint& x) const {
    Cell c{std::vector<std::size_t>(res_.size()), std::vector<double>(res_.size())};
    for (std::size_t j = 0; j < res_.size(); ++j) {
      const double t = x.value(j + 1) * static_cast<double>(res_[j]);
      double fl = std::floor(t);
      auto k = static_cast<std::size_t>(fl);
      if (k >= res_[j]) {
        k = res_[j] - 1;
        fl = static_cast<double>(k);
      }
      c.k[j] = k;
      c.frac[j] = std::clamp(t - fl, 0.0, 1.0);
    }
    return c;
  }

  // value at corner `mask` of the cell with lower node k; bit (n-1-j) selects +1 on axis j
  double node(const std::vector<std::size_t>& k, std::size_t mask) const {
    const std::size_t n = res_.size();
    std::size_t offset = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t kj = k[j];
      if (mask & (std::size_t{1} << (n - 1 - j))) kj = (kj + 1) % res_[j];
      offset += kj * strides_[j];
    }
    return values_[offset];
  }

  double interpolate(const Cell& c, std::size_t skip_axis, int side = 0) const {
    const std::size_t n = res_.size();
    double s = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        const bool up = mask & (std::size_t{1} << (n - 1 - j));
        if (j == skip_axis) {
          if (up != (side == 1)) {
            w = 0.0;
            break;
          }
          continue;
        }
        w *= up ? c.frac[j] : 1.0 - c.frac[j];
      }
      if (w != 0.0) s += w * node(c.k, mask);
    }
    return s;
  }

  // interpolant restricted to the face {axis = side}
  double interpolate_pinned(const Cell& c, std::size_t axis, int side) const {
    return interpolate(c, axis, side);
  }

  void advance(std::vector<std::size_t>& k) const {
    for (std::size_t j = res_.size(); j-- > 0;) {
      if (++k[j] < res_[j]) return;
      k[j] = 0;
    }
  }

  std::vector<std::size_t> res_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

struct NormalizedFunction {
  FunctionPtr function;
  double factor = 1.0;  // original = factor * normalized
};

/// Rescales f to Lipschitz constant 1 under dist_p. The zero-Lipschitz
/// (constant) function and already-normalised inputs come back with factor 1.
inline NormalizedFunction normalize_to_unit_lipschitz(const FunctionPtr& f, const DualExponent& d) {
  const double lip = f->lipschitz_constant(d);
  if (lip == 0.0 || std::abs(lip - 1.0) <= 1e-12) return {f, 1.0};
  return {f->scaled(1.0 / lip), lip};
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_FUNCTION_HPP
