#ifndef TORUS_SPECTRUM_GEOMETRY_HPP
#define TORUS_SPECTRUM_GEOMETRY_HPP

// Points, coordinates and l_p metrics on truncations of the infinite torus,
// and parallel subtori (some coordinates free, the rest pinned).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "torus_spectrum/errors.hpp"

namespace torus_spectrum {

/// A point of the circle R/Z, stored as its representative in [0, 1).
class TorusCoordinate {
 public:
  constexpr TorusCoordinate() = default;
  explicit TorusCoordinate(double v) : value_(wrap(v)) {}

  double value() const { return value_; }

  friend TorusCoordinate operator+(TorusCoordinate a, TorusCoordinate b) {
    return TorusCoordinate(a.value_ + b.value_);
  }
  friend TorusCoordinate operator-(TorusCoordinate a, TorusCoordinate b) {
    return TorusCoordinate(a.value_ - b.value_);
  }
  friend bool operator==(TorusCoordinate, TorusCoordinate) = default;

  static double wrap(double v) {
    if (!std::isfinite(v)) throw ValidationError("torus coordinate must be finite");
    double r = v - std::floor(v);
    // -tiny wraps to 1.0 after rounding
    if (r >= 1.0) r = 0.0;
    return r;
  }

 private:
  double value_ = 0.0;
};

/// Distance on R/Z; always in [0, 1/2].
inline double circle_dist(TorusCoordinate x, TorusCoordinate y) {
  const double d = std::abs(x.value() - y.value());
  return std::min(d, 1.0 - d);
}

/// The exponent p of dist_p together with its Hoelder dual q.
/// Only p in (1, inf] is accepted.
class DualExponent {
 public:
  explicit DualExponent(double p) : p_(p) {
    if (std::isnan(p) || !(p > 1.0)) {
      throw ValidationError("exponent p must satisfy p > 1 (got " + std::to_string(p) + ")");
    }
    q_ = std::isinf(p) ? 1.0 : p / (p - 1.0);
  }

  static DualExponent infinity() { return DualExponent(std::numeric_limits<double>::infinity()); }

  double p() const { return p_; }
  double q() const { return q_; }
  bool is_infinite() const { return std::isinf(p_); }

 private:
  double p_;
  double q_;
};

/// A point of the torus truncated at `dim()` coordinates, indexed from 1.
/// Coordinates that were never set hold 0; reads past `dim()` also give 0.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::size_t dim) : coords_(dim, 0.0) {}
  TorusPoint(std::initializer_list<double> values) {
    coords_.reserve(values.size());
    for (double v : values) coords_.push_back(TorusCoordinate::wrap(v));
  }
  explicit TorusPoint(std::span<const double> values) {
    coords_.reserve(values.size());
    for (double v : values) coords_.push_back(TorusCoordinate::wrap(v));
  }

  std::size_t dim() const { return coords_.size(); }

  double value(std::size_t index) const {
    if (index == 0) throw ValidationError("torus indices start at 1");
    return index <= coords_.size() ? coords_[index - 1] : 0.0;
  }
  TorusCoordinate operator[](std::size_t index) const { return TorusCoordinate(value(index)); }

  void set(std::size_t index, double v) {
    if (index == 0 || index > coords_.size()) {
      throw ValidationError("index " + std::to_string(index) + " outside point of dimension " +
                            std::to_string(coords_.size()));
    }
    coords_[index - 1] = TorusCoordinate::wrap(v);
  }
  void set(std::size_t index, TorusCoordinate c) { set(index, c.value()); }

  std::span<const double> values() const { return coords_; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// dist_p over the explicit coordinates. Both points must share a dimension.
inline double dist_p(const TorusPoint& x, const TorusPoint& y, const DualExponent& d) {
  if (x.dim() != y.dim()) {
    throw ValidationError("dist_p: dimension mismatch (" + std::to_string(x.dim()) + " vs " +
                          std::to_string(y.dim()) + ")");
  }
  const auto xs = x.values();
  const auto ys = y.values();
  if (d.is_infinite()) {
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      m = std::max(m, circle_dist(TorusCoordinate(xs[i]), TorusCoordinate(ys[i])));
    }
    return m;
  }
  const double p = d.p();
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += std::pow(circle_dist(TorusCoordinate(xs[i]), TorusCoordinate(ys[i])), p);
  }
  return std::pow(s, 1.0 / p);
}

enum class TailPolicy {
  fixed_at_base,  // indices beyond the horizon are pinned (at the default 0)
  free_with_tail_bound,  // every index beyond the horizon is free
};

inline std::string to_string(TailPolicy t) {
  return t == TailPolicy::fixed_at_base ? "fixed" : "free";
}

inline TailPolicy tail_policy_from_string(const std::string& s) {
  if (s == "fixed") return TailPolicy::fixed_at_base;
  if (s == "free") return TailPolicy::free_with_tail_bound;
  throw ValidationError("tail policy must be \"fixed\" or \"free\" (got \"" + s + "\")");
}

/// A parallel subtorus truncated at `horizon()`: the coordinates in `free()`
/// vary, every other index in 1..horizon is pinned to a base value.
class SubtorusSpec {
 public:
  SubtorusSpec() = default;

  /// `fixed` must give a value for every index in 1..horizon not in `free`.
  SubtorusSpec(std::size_t horizon, std::vector<std::size_t> free,
               const std::map<std::size_t, double>& fixed, TailPolicy tail)
      : horizon_(horizon), free_(std::move(free)), base_(horizon, 0.0),
        is_free_(horizon, false), tail_(tail) {
    check_free();
    std::size_t covered = free_.size();
    for (const auto& [index, v] : fixed) {
      if (index == 0 || index > horizon_) {
        throw ValidationError("fixed index " + std::to_string(index) + " outside 1.." +
                              std::to_string(horizon_));
      }
      if (is_free_[index - 1]) {
        throw ValidationError("index " + std::to_string(index) + " is both free and fixed");
      }
      base_[index - 1] = TorusCoordinate::wrap(v);
      ++covered;
    }
    if (covered != horizon_) {
      throw ValidationError("free and fixed indices must cover 1.." + std::to_string(horizon_));
    }
  }

  /// Takes the pinned values from `base` (coordinates beyond base.dim() are 0).
  static SubtorusSpec from_base(std::size_t horizon, std::vector<std::size_t> free,
                                const TorusPoint& base, TailPolicy tail) {
    SubtorusSpec s;
    s.horizon_ = horizon;
    s.free_ = std::move(free);
    s.base_.assign(horizon, 0.0);
    s.is_free_.assign(horizon, false);
    s.tail_ = tail;
    s.check_free();
    for (std::size_t i = 1; i <= horizon; ++i) {
      if (!s.is_free_[i - 1]) s.base_[i - 1] = base.value(i);
    }
    return s;
  }

  /// Every index in 1..horizon free.
  static SubtorusSpec full(std::size_t horizon, TailPolicy tail = TailPolicy::fixed_at_base) {
    std::vector<std::size_t> free(horizon);
    for (std::size_t i = 0; i < horizon; ++i) free[i] = i + 1;
    return from_base(horizon, std::move(free), TorusPoint(horizon), tail);
  }

  std::size_t horizon() const { return horizon_; }
  const std::vector<std::size_t>& free() const { return free_; }
  TailPolicy tail() const { return tail_; }

  bool is_free(std::size_t index) const {
    if (index == 0) throw ValidationError("torus indices start at 1");
    if (index > horizon_) return tail_ == TailPolicy::free_with_tail_bound;
    return is_free_[index - 1];
  }

  /// Pinned value at `index`; 0 for pinned indices beyond the horizon.
  double fixed_value(std::size_t index) const {
    if (is_free(index)) throw ValidationError("index " + std::to_string(index) + " is free");
    return index <= horizon_ ? base_[index - 1] : 0.0;
  }

  /// All pinned values, free coordinates at 0.
  TorusPoint base_point() const { return TorusPoint(std::span<const double>(base_)); }

  std::map<std::size_t, double> fixed_map() const {
    std::map<std::size_t, double> m;
    for (std::size_t i = 1; i <= horizon_; ++i) {
      if (!is_free_[i - 1]) m.emplace_hint(m.end(), i, base_[i - 1]);
    }
    return m;
  }

  friend bool operator==(const SubtorusSpec&, const SubtorusSpec&) = default;

 private:
  void check_free() {
    for (std::size_t k = 0; k < free_.size(); ++k) {
      const std::size_t index = free_[k];
      if (index == 0 || index > horizon_) {
        throw ValidationError("free index " + std::to_string(index) + " outside 1.." +
                              std::to_string(horizon_));
      }
      if (k > 0 && free_[k - 1] >= index) {
        throw ValidationError("free indices must be strictly increasing");
      }
      is_free_[index - 1] = true;
    }
  }

  std::size_t horizon_ = 0;
  std::vector<std::size_t> free_;
  std::vector<double> base_;
  std::vector<bool> is_free_;
  TailPolicy tail_ = TailPolicy::fixed_at_base;
};

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_GEOMETRY_HPP
