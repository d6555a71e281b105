#ifndef TORUS_SPECTRUM_STATISTICS_HPP
#define TORUS_SPECTRUM_STATISTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "torus_spectrum/errors.hpp"

namespace torus_spectrum {

/// Exact floating-point summation (Shewchuk's nonoverlapping partials, as in
/// Python's math.fsum). The rounded result depends only on the exact sum, so
/// adds and merges may happen in any order and still give identical bits.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  /// Adds the exact product a*b.
  void add_product(double a, double b) {
    const double p = a * b;
    add(p);
    add(std::fma(a, b, -p));
  }

  void merge(const ExactSum& other) {
    for (double x : other.partials_) add(x);
  }

  std::span<const double> partials() const { return partials_; }

  /// Correctly rounded value of the exact sum.
  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // round-half-even correction when the remaining partials push past a tie
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

/// Running Monte Carlo estimate of a mean. Merging is exact, hence
/// associative and commutative down to the last bit.
class MCEstimate {
 public:
  static constexpr double kZ95 = 1.96;

  void add(double x) {
    if (!std::isfinite(x)) {
      ++non_finite_;
      return;
    }
    ++n_;
    sum_.add(x);
    sum_sq_.add_product(x, x);
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }

  void merge(const MCEstimate& o) {
    n_ += o.n_;
    non_finite_ += o.non_finite_;
    sum_.merge(o.sum_);
    sum_sq_.merge(o.sum_sq_);
    min_ = std::min(min_, o.min_);
    max_ = std::max(max_, o.max_);
  }

  std::size_t count() const { return n_; }
  std::size_t non_finite() const { return non_finite_; }
  double min() const { return min_; }
  double max() const { return max_; }

  double mean() const {
    if (n_ == 0) return std::numeric_limits<double>::quiet_NaN();
    if (min_ == max_) return min_;
    return sum_.value() / static_cast<double>(n_);
  }

  /// Unbiased sample variance, from exact sums: sum x^2 - 2 m sum x + n m^2.
  double variance() const {
    if (n_ < 2 || min_ == max_) return 0.0;
    const double m = mean();
    ExactSum ss = sum_sq_;
    for (double s : sum_.partials()) ss.add_product(-2.0 * m, s);
    const double mm = m * m;
    const double n = static_cast<double>(n_);
    ss.add_product(n, mm);
    ss.add_product(n, std::fma(m, m, -mm));
    return std::max(0.0, ss.value() / (n - 1.0));
  }

  double std_error() const {
    return n_ == 0 ? std::numeric_limits<double>::quiet_NaN()
                   : std::sqrt(variance() / static_cast<double>(n_));
  }

  std::pair<double, double> confidence_interval(double z = kZ95) const {
    const double m = mean();
    const double h = z * std_error();
    return {m - h, m + h};
  }

 private:
  std::size_t n_ = 0;
  std::size_t non_finite_ = 0;
  ExactSum sum_;
  ExactSum sum_sq_;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

/// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-17 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF
/// (Stephens' finite-sample correction on the asymptotic law).
inline KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

inline KsResult ks_uniform(std::vector<double> sample) {
  return ks_test(std::move(sample), [](double x) { return std::clamp(x, 0.0, 1.0); });
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("pearson_correlation: bad sizes");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_STATISTICS_HPP
