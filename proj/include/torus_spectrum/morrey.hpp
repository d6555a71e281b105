#ifndef TORUS_SPECTRUM_MORREY_HPP
#define TORUS_SPECTRUM_MORREY_HPP

// Morrey-type oscillation certificates on T^n and the random chain
//   P_n = P,  P'_i uniform in the l_p ball of radius eps/2^i around P_{i+1}
//   inside the first i coordinates,  P_i = P'_i with coordinate i+1 redrawn,
// whose endpoint P_0 is uniform on T^n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "torus_spectrum/constants.hpp"
#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/function.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/grid_oracle.hpp"
#include "torus_spectrum/log_real.hpp"
#include "torus_spectrum/parallel.hpp"
#include "torus_spectrum/random.hpp"
#include "torus_spectrum/sampling.hpp"
#include "torus_spectrum/statistics.hpp"

namespace torus_spectrum {

/// Which form of the hypothesis to test. Both weigh d/dx_i by c(eps, p, i);
/// the finite-torus form accepts a weighted sum up to 1, the infinite-torus
/// form (used on truncations of T^infinity) up to 1/2.
enum class MorreyMode { finite_torus, infinite_torus };

inline double morrey_threshold(MorreyMode m) { return m == MorreyMode::finite_torus ? 1.0 : 0.5; }

inline std::string to_string(MorreyMode m) { return m == MorreyMode::finite_torus ? "finite" : "infinite"; }

inline MorreyMode morrey_mode_from_string(const std::string& s) {
  if (s == "finite") return MorreyMode::finite_torus;
  if (s == "infinite") return MorreyMode::infinite_torus;
  throw ValidationError("mode must be \"finite\" or \"infinite\" (got \"" + s + "\")");
}

enum class HypothesisStatus { holds, fails, undecided };

inline std::string to_string(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::holds: return "holds";
    case HypothesisStatus::fails: return "fails";
    default: return "undecided";
  }
}

struct HypothesisValue {
  bool exact = false;
  LogReal value;                       // exact value, or the MC mean
  std::optional<MCEstimate> estimate;  // MC path only
  std::vector<double> terms;           // weighted term per coordinate 1..n (MC: term means)
  double threshold = 1.0;
  HypothesisStatus status = HypothesisStatus::undecided;
};

struct HypothesisOptions {
  std::size_t samples = 20000;
  RandomStream rng{};
  unsigned workers = 1;
  double margin_sigmas = 3.0;
  bool force_mc = false;
};

/// sum_{i=1..n} c(eps, p, i) * integral over T^n of |d f / d x_i|^q.
/// Exact when f provides per-coordinate q-norms, Monte Carlo otherwise.
inline HypothesisValue morrey_hypothesis(const TorusFunction& f, std::size_t n, double eps, const DualExponent& d,
                                         MorreyMode mode, const HypothesisOptions& opt = {}) {
  detail::check_eps(eps);
  if (n == 0) throw ValidationError("morrey_hypothesis: dimension must be at least 1");
  HypothesisValue out;
  out.threshold = morrey_threshold(mode);
  std::vector<LogReal> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = morrey_weight(static_cast<unsigned>(i + 1), eps, d);

  bool exact = !opt.force_mc;
  std::vector<double> qnorms(n, 0.0);
  for (std::size_t i = 0; i < n && exact; ++i) {
    if (auto v = f.exact_partial_qnorm(i + 1, d)) {
      qnorms[i] = *v;
    } else {
      exact = false;
    }
  }

  if (exact) {
    LogReal total;
    out.terms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const LogReal term = weights[i] * LogReal::from_double(qnorms[i]);
      out.terms[i] = term.value();
      total = total + term;
    }
    out.exact = true;
    out.value = total;
    out.status = total <= LogReal::from_double(out.threshold) ? HypothesisStatus::holds : HypothesisStatus::fails;
    return out;
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = weights[i].value();
  const double q = d.q();
  const SubtorusSpec torus = SubtorusSpec::full(n);
  std::vector<MCEstimate> total(std::max(1u, opt.workers));
  std::vector<std::vector<MCEstimate>> per_term(total.size(), std::vector<MCEstimate>(n));
  parallel_for(opt.samples, opt.workers, [&](std::size_t begin, std::size_t end, unsigned wk) {
    for (std::size_t j = begin; j < end; ++j) {
      RandomStream s = opt.rng.substream(j);
      const TorusPoint x = sample_point(torus, s);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double g = std::abs(f.partial(i + 1, x));
        const double term = g == 0.0 ? 0.0 : w[i] * std::pow(g, q);
        per_term[wk][i].add(term);
        sum += term;
      }
      total[wk].add(sum);
    }
  });
  MCEstimate est;
  for (const auto& e : total) est.merge(e);
  out.terms.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    MCEstimate t;
    for (const auto& pt : per_term) t.merge(pt[i]);
    out.terms[i] = t.mean();
  }
  out.value = LogReal::from_double(est.mean());
  const double m = est.mean(), se = est.std_error();
  if (!std::isfinite(m)) {
    out.status = HypothesisStatus::fails;
  } else if (m + opt.margin_sigmas * se <= out.threshold) {
    out.status = HypothesisStatus::holds;
  } else if (m - opt.margin_sigmas * se > out.threshold) {
    out.status = HypothesisStatus::fails;
  } else {
    out.status = HypothesisStatus::undecided;
  }
  out.estimate = est;
  return out;
}

enum class MorreyVerdict { certified, hypothesis_failed, inconclusive };

inline std::string to_string(MorreyVerdict v) {
  switch (v) {
    case MorreyVerdict::certified: return "certified";
    case MorreyVerdict::hypothesis_failed: return "hypothesis-failed";
    default: return "inconclusive";
  }
}

struct MorreyCertificate {
  double eps = 0.0;
  double p = 2.0;
  std::size_t n = 0;
  MorreyMode mode = MorreyMode::finite_torus;
  HypothesisValue hypothesis;
  double osc_bound = 0.0;  // 8 eps
  std::optional<double> exact_osc;
  std::optional<OscBracket> grid_osc;
  std::vector<std::size_t> grid_resolution;
  OscBracket measured_osc{0.0, std::numeric_limits<double>::infinity()};
  MorreyVerdict verdict = MorreyVerdict::inconclusive;
};

struct CheckOptions {
  HypothesisOptions hypothesis{};
  bool use_grid = true;
  std::size_t grid_resolution = 0;  // per axis; 0 picks the largest within grid_budget
  double grid_budget = 1e6;
  unsigned workers = 1;
};

inline constexpr double kLipschitzSlack = 1e-9;

/// Tests the hypothesis on T^n and measures the oscillation it predicts.
/// A 1-Lipschitz f that passes the hypothesis yet oscillates by 8 eps or more
/// is impossible; that outcome raises InvariantViolation.
inline MorreyCertificate check_morrey(const TorusFunction& f, std::size_t n, double eps, const DualExponent& d,
                                      MorreyMode mode, const CheckOptions& opt = {}) {
  detail::check_eps(eps);
  if (n == 0) throw ValidationError("check_morrey: dimension must be at least 1");
  const double lip = f.lipschitz_constant(d);
  if (lip > 1.0 + kLipschitzSlack) {
    throw ValidationError("check_morrey: f must be 1-Lipschitz under dist_p (Lipschitz constant " +
                          std::to_string(lip) + "); normalize it first");
  }
  MorreyCertificate c;
  c.eps = eps;
  c.p = d.p();
  c.n = n;
  c.mode = mode;
  c.osc_bound = 8.0 * eps;
  c.hypothesis = morrey_hypothesis(f, n, eps, d, mode, opt.hypothesis);

  const SubtorusSpec torus = SubtorusSpec::full(n);
  c.exact_osc = f.exact_osc(torus);
  if (c.exact_osc) c.measured_osc = {*c.exact_osc, *c.exact_osc};
  if (opt.use_grid && n <= kMaxGridOracleDim) {
    const std::size_t r = opt.grid_resolution ? opt.grid_resolution : uniform_resolution(n, opt.grid_budget);
    c.grid_resolution.assign(n, r);
    c.grid_osc = grid_oracle_osc(f, torus, c.grid_resolution, d, opt.workers);
    c.measured_osc.lower = std::max(c.measured_osc.lower, c.grid_osc->lower);
    c.measured_osc.upper = std::min(c.measured_osc.upper, c.grid_osc->upper);
  }

  switch (c.hypothesis.status) {
    case HypothesisStatus::fails:
      c.verdict = MorreyVerdict::hypothesis_failed;
      break;
    case HypothesisStatus::undecided:
      c.verdict = MorreyVerdict::inconclusive;
      break;
    case HypothesisStatus::holds:
      if (c.measured_osc.lower >= c.osc_bound) {
        throw InvariantViolation("CRITICAL: hypothesis holds but measured oscillation " +
                                 std::to_string(c.measured_osc.lower) + " >= 8 eps = " + std::to_string(c.osc_bound) +
                                 "; this is a bug in the implementation");
      }
      c.verdict = c.measured_osc.upper < c.osc_bound ? MorreyVerdict::certified : MorreyVerdict::inconclusive;
      break;
  }
  return c;
}

struct ChainStep {
  std::size_t level = 0;  // i
  double radius = 0.0;    // eps / 2^i
  TorusPoint ball_point;  // P'_i
  TorusPoint point;       // P_i
  double f_ball = 0.0;    // f(P'_i)
  double f_point = 0.0;   // f(P_i)
  double f_parent = 0.0;  // f(P_{i+1})
  double ball_dist = 0.0; // dist_p(P'_i, P_{i+1})
};

struct ChainState {
  TorusPoint start;  // P_n = P
  double f_start = 0.0;
  std::vector<ChainStep> steps;  // levels n-1, ..., 0

  const TorusPoint& end() const { return steps.empty() ? start : steps.back().point; }
  double f_end() const { return steps.empty() ? f_start : steps.back().f_point; }
};

/// One run of the chain from P on T^n.
inline ChainState run_chain(const TorusFunction& f, std::size_t n, double eps, const DualExponent& d,
                            const TorusPoint& start, RandomStream& rng) {
  detail::check_eps(eps);
  if (start.dim() != n) {
    throw ValidationError("run_chain: start point has dimension " + std::to_string(start.dim()) + ", expected " +
                          std::to_string(n));
  }
  ChainState chain;
  chain.start = start;
  chain.f_start = f.eval(start);
  chain.steps.reserve(n);
  TorusPoint parent = start;
  double f_parent = chain.f_start;
  for (std::size_t i = n; i-- > 0;) {
    ChainStep step;
    step.level = i;
    step.radius = std::ldexp(eps, -static_cast<int>(i));
    step.f_parent = f_parent;
    TorusPoint ball = parent;
    const std::vector<double> v = sample_lp_ball(i, step.radius, d, rng);
    for (std::size_t j = 0; j < i; ++j) ball.set(j + 1, parent.value(j + 1) + v[j]);
    step.ball_dist = dist_p(ball, parent, d);
    if (step.ball_dist > step.radius * (1.0 + 1e-12) + 1e-15) {
      throw InvariantViolation("run_chain: ball step left the l_p ball at level " + std::to_string(i));
    }
    TorusPoint point = ball;
    point.set(i + 1, rng.uniform());
    step.f_ball = f.eval(ball);
    step.f_point = f.eval(point);
    step.ball_point = std::move(ball);
    step.point = point;
    f_parent = step.f_point;
    parent = std::move(point);
    chain.steps.push_back(std::move(step));
  }
  return chain;
}

struct ChainLevelStats {
  std::size_t level = 0;
  double radius = 0.0;
  MCEstimate line_increment;     // |f(P'_i) - f(P_i)|
  double max_ball_increment = 0.0;  // max |f(P'_i) - f(P_{i+1})|
  double max_ball_dist = 0.0;
};

struct CoordinateUniformity {
  std::size_t index = 0;
  KsResult ks;
};

struct ChainReport {
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t chains = 0;
  bool exploratory = false;  // hypothesis not established for f
  HypothesisStatus hypothesis_status = HypothesisStatus::undecided;
  MCEstimate abs_diff;       // |f(P) - f(P_0)|
  double bound = 0.0;        // 4 eps
  std::vector<ChainLevelStats> levels;  // levels n-1, ..., 0
  std::vector<CoordinateUniformity> endpoint_uniformity;
  double max_abs_correlation = 0.0;
  double correlation_threshold = 0.0;  // 4 / sqrt(chains)
  std::vector<TorusPoint> endpoints;    // filled when requested
  std::vector<double> endpoint_values;
};

struct ChainOptions {
  unsigned workers = 1;
  bool keep_endpoints = false;
  std::size_t hypothesis_samples = 20000;
};

/// Runs `chains` independent chains (chain j on rng.substream(j)) and
/// summarises the increments and the law of the endpoint P_0.
inline ChainReport chain_statistics(const TorusFunction& f, std::size_t n, double eps, const DualExponent& d,
                                    const TorusPoint& start, std::size_t chains, const RandomStream& rng,
                                    const ChainOptions& opt = {}) {
  if (chains < 2) throw ValidationError("chain_statistics: need at least 2 chains");
  ChainReport r;
  r.n = n;
  r.eps = eps;
  r.chains = chains;
  r.bound = 4.0 * eps;
  HypothesisOptions ho;
  ho.samples = opt.hypothesis_samples;
  ho.rng = rng.substream(~std::uint64_t{0});
  ho.workers = opt.workers;
  r.hypothesis_status = morrey_hypothesis(f, n, eps, d, MorreyMode::finite_torus, ho).status;
  r.exploratory = r.hypothesis_status != HypothesisStatus::holds;

  const std::size_t slots = std::max(1u, opt.workers);
  std::vector<MCEstimate> diff(slots);
  std::vector<std::vector<ChainLevelStats>> lv(slots, std::vector<ChainLevelStats>(n));
  std::vector<double> ends(chains * n);
  std::vector<double> end_values(chains);
  parallel_for(chains, opt.workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    for (std::size_t j = begin; j < end; ++j) {
      RandomStream s = rng.substream(j);
      const ChainState c = run_chain(f, n, eps, d, start, s);
      diff[w].add(std::abs(c.f_start - c.f_end()));
      for (std::size_t k = 0; k < c.steps.size(); ++k) {
        const ChainStep& st = c.steps[k];
        ChainLevelStats& L = lv[w][k];
        L.level = st.level;
        L.radius = st.radius;
        L.line_increment.add(std::abs(st.f_ball - st.f_point));
        L.max_ball_increment = std::max(L.max_ball_increment, std::abs(st.f_ball - st.f_parent));
        L.max_ball_dist = std::max(L.max_ball_dist, st.ball_dist);
      }
      for (std::size_t i = 0; i < n; ++i) ends[j * n + i] = c.end().value(i + 1);
      end_values[j] = c.f_end();
    }
  });
  for (std::size_t w = 0; w < slots; ++w) {
    r.abs_diff.merge(diff[w]);
  }
  r.levels.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ChainLevelStats& L = r.levels[k];
    L.level = n - 1 - k;
    L.radius = std::ldexp(eps, -static_cast<int>(L.level));
    for (std::size_t w = 0; w < slots; ++w) {
      L.line_increment.merge(lv[w][k].line_increment);
      L.max_ball_increment = std::max(L.max_ball_increment, lv[w][k].max_ball_increment);
      L.max_ball_dist = std::max(L.max_ball_dist, lv[w][k].max_ball_dist);
    }
  }

  std::vector<std::vector<double>> cols(n, std::vector<double>(chains));
  for (std::size_t j = 0; j < chains; ++j) {
    for (std::size_t i = 0; i < n; ++i) cols[i][j] = ends[j * n + i];
  }
  for (std::size_t i = 0; i < n; ++i) r.endpoint_uniformity.push_back({i + 1, ks_uniform(cols[i])});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      r.max_abs_correlation = std::max(r.max_abs_correlation, std::abs(pearson_correlation(cols[a], cols[b])));
    }
  }
  r.correlation_threshold = 4.0 / std::sqrt(static_cast<double>(chains));
  if (opt.keep_endpoints) {
    r.endpoints.reserve(chains);
    for (std::size_t j = 0; j < chains; ++j) {
      r.endpoints.emplace_back(std::span<const double>(ends.data() + j * n, n));
    }
    r.endpoint_values = std::move(end_values);
  }
  return r;
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_MORREY_HPP
