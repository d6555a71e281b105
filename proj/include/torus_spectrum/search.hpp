#ifndef TORUS_SPECTRUM_SEARCH_HPP
#define TORUS_SPECTRUM_SEARCH_HPP

// Randomized search for a parallel subtorus on which f is nearly constant,
// and the nested-subtorus iteration that pins down a spectrum value.
//
// Indices are split into consecutive blocks B_1, B_2, ... of sizes
// block_size(n, eps, p); one index is drawn uniformly from each block and the
// others are pinned at a uniform base point. A draw is accepted when
//     sum_n c(eps, p, n) * integral |d f / d x_{i_n}|^q  <=  1/2,
// which for a 1-Lipschitz f happens with probability at least 1/2 and then
// bounds the oscillation on the subtorus by 8 eps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torus_spectrum/constants.hpp"
#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/function.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/log_real.hpp"
#include "torus_spectrum/morrey.hpp"
#include "torus_spectrum/parallel.hpp"
#include "torus_spectrum/random.hpp"
#include "torus_spectrum/sampling.hpp"
#include "torus_spectrum/statistics.hpp"

namespace torus_spectrum {

inline constexpr double kAcceptThreshold = 0.5;

struct Block {
  std::uint64_t first = 1;  // 1-based position in the index universe
  std::uint64_t size = 0;
};

class BlockPartition {
 public:
  static constexpr std::uint64_t kDefaultMaxTotal = std::uint64_t{1} << 24;  // a base point is stored per index

  static BlockPartition make(double eps, const DualExponent& d, std::size_t count,
                             std::uint64_t max_total = kDefaultMaxTotal) {
    if (count == 0) throw ValidationError("block partition: need at least one block");
    BlockPartition bp;
    std::uint64_t next = 1;
    for (std::size_t n = 1; n <= count; ++n) {
      const BlockSize bs = block_size(static_cast<unsigned>(n), eps, d);
      if (!bs.count || *bs.count > max_total || next - 1 + *bs.count > max_total) {
        throw ValidationError("block " + std::to_string(n) + " has about 10^" +
                              std::to_string(bs.raw.log10_magnitude()) +
                              " indices, beyond the practical index range; use fewer blocks or a larger eps");
      }
      bp.blocks_.push_back({next, *bs.count});
      next += *bs.count;
    }
    bp.total_ = next - 1;
    return bp;
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  std::uint64_t total() const { return total_; }

 private:
  std::vector<Block> blocks_;
  std::uint64_t total_ = 0;
};

/// The free indices of a parent torus relabelled 1, 2, 3, ... in increasing
/// order; under a free tail the list continues past the horizon forever.
class IndexUniverse {
 public:
  IndexUniverse() = default;  // the whole torus: position k is index k
  explicit IndexUniverse(const SubtorusSpec& parent)
      : explicit_(parent.free()), horizon_(parent.horizon()),
        unbounded_(parent.tail() == TailPolicy::free_with_tail_bound) {}

  bool unbounded() const { return unbounded_; }
  std::uint64_t size() const { return explicit_.size(); }  // meaningful when bounded

  std::size_t at(std::uint64_t position) const {
    if (position == 0) throw ValidationError("index universe positions start at 1");
    if (position <= explicit_.size()) return explicit_[position - 1];
    if (!unbounded_) throw ValidationError("index universe exhausted");
    return horizon_ + static_cast<std::size_t>(position - explicit_.size());
  }

 private:
  std::vector<std::size_t> explicit_;
  std::size_t horizon_ = 0;
  bool unbounded_ = true;
};

struct SearchOutcome {
  double eps = 0.0;
  std::size_t blocks = 0;
  std::vector<std::size_t> indices;  // i_1 < i_2 < ..., i_n drawn from block n
  SubtorusSpec subtorus;
  bool exact = false;
  LogReal weighted_sum;
  std::vector<double> terms;  // c_n * integral |d f/d x_{i_n}|^q
  std::optional<MCEstimate> estimate;
  bool accepted = false;
  std::size_t attempts = 1;
  std::optional<double> exact_osc;  // oracle oscillation on the subtorus
};

struct SearchOptions {
  TailPolicy tail = TailPolicy::fixed_at_base;
  std::optional<SubtorusSpec> parent;  // search inside this torus; default: all of T^infinity
  std::size_t mc_samples = 4000;
  double margin_sigmas = 3.0;
  unsigned workers = 1;
  std::size_t max_attempts = 64;
};

/// One candidate: block indices from rng.substream(0), base point from
/// substream(1), Monte Carlo (if needed) from substream(2).
inline SearchOutcome draw_candidate(const TorusFunction& f, double eps, const DualExponent& d, std::size_t blocks,
                                    const RandomStream& rng, const SearchOptions& opt = {}) {
  detail::check_eps(eps);
  const BlockPartition partition = BlockPartition::make(eps, d, blocks);
  const IndexUniverse universe = opt.parent ? IndexUniverse(*opt.parent) : IndexUniverse();
  if (!universe.unbounded() && partition.total() > universe.size()) {
    throw ValidationError("parent torus has " + std::to_string(universe.size()) + " free coordinates but the blocks need " +
                          std::to_string(partition.total()));
  }

  SearchOutcome out;
  out.eps = eps;
  out.blocks = blocks;
  RandomStream pick = rng.substream(0);
  for (const Block& b : partition.blocks()) out.indices.push_back(universe.at(b.first + pick.uniform_index(b.size)));

  const std::size_t parent_horizon = opt.parent ? opt.parent->horizon() : 0;
  const std::size_t horizon = std::max(parent_horizon, universe.at(partition.total()));
  TorusPoint base(horizon);
  RandomStream base_rng = rng.substream(1);
  std::size_t next_free = 0;
  for (std::size_t i = 1; i <= horizon; ++i) {
    if (next_free < out.indices.size() && out.indices[next_free] == i) {
      ++next_free;
      continue;
    }
    if (opt.parent && !opt.parent->is_free(i)) {
      base.set(i, opt.parent->fixed_value(i));
    } else {
      base.set(i, base_rng.uniform());
    }
  }
  out.subtorus = SubtorusSpec::from_base(horizon, out.indices, base, opt.tail);

  std::vector<LogReal> weights;
  for (std::size_t n = 1; n <= blocks; ++n) weights.push_back(morrey_weight(static_cast<unsigned>(n), eps, d));

  std::vector<double> qnorms;
  for (std::size_t i : out.indices) {
    auto v = f.exact_partial_qnorm(i, d);
    if (!v) break;
    qnorms.push_back(*v);
  }
  if (qnorms.size() == out.indices.size()) {
    out.exact = true;
    LogReal total;
    for (std::size_t n = 0; n < blocks; ++n) {
      const LogReal term = weights[n] * LogReal::from_double(qnorms[n]);
      out.terms.push_back(term.value());
      total = total + term;
    }
    out.weighted_sum = total;
    out.accepted = total <= LogReal::from_double(kAcceptThreshold);
  } else {
    std::vector<double> w;
    for (const LogReal& x : weights) w.push_back(x.value());
    const double q = d.q();
    const auto integrand = [&](const TorusPoint& x) {
      double s = 0.0;
      for (std::size_t n = 0; n < blocks; ++n) {
        const double g = std::abs(f.partial(out.indices[n], x));
        if (g != 0.0) s += w[n] * std::pow(g, q);
      }
      return s;
    };
    MCOptions mo;
    mo.workers = opt.workers;
    mo.dim = evaluation_dim(f, out.subtorus);
    const MCEstimate est = mc_integral(integrand, out.subtorus, opt.mc_samples, rng.substream(2), mo);
    out.estimate = est;
    out.weighted_sum = LogReal::from_double(est.mean());
    out.accepted = est.mean() + opt.margin_sigmas * est.std_error() <= kAcceptThreshold;
    // per-term means are not tracked on this path
  }
  out.exact_osc = f.exact_osc(out.subtorus);
  return out;
}

/// Redraws candidates (candidate k on rng.substream(k)) until one is accepted.
/// Candidates run in parallel batches; the lowest accepted k wins, so the
/// result does not depend on `workers`.
inline SearchOutcome find_subtorus(const TorusFunction& f, double eps, const DualExponent& d, std::size_t blocks,
                                   const RandomStream& rng, const SearchOptions& opt = {}) {
  detail::check_eps(eps);
  const double lip = f.lipschitz_constant(d);
  if (lip > 1.0 + kLipschitzSlack) {
    throw ValidationError("find_subtorus: f must be 1-Lipschitz under dist_p (Lipschitz constant " +
                          std::to_string(lip) + "); normalize it first");
  }
  if (opt.max_attempts == 0) throw ValidationError("find_subtorus: max_attempts must be positive");
  const unsigned batch = std::max(1u, opt.workers);
  SearchOptions inner = opt;
  inner.workers = batch > 1 ? 1 : opt.workers;
  for (std::size_t start = 0; start < opt.max_attempts; start += batch) {
    const std::size_t count = std::min<std::size_t>(batch, opt.max_attempts - start);
    std::vector<std::optional<SearchOutcome>> results(count);
    parallel_for(count, batch, [&](std::size_t b, std::size_t e, unsigned) {
      for (std::size_t k = b; k < e; ++k) results[k] = draw_candidate(f, eps, d, blocks, rng.substream(start + k), inner);
    });
    for (std::size_t k = 0; k < count; ++k) {
      if (!results[k]->accepted) continue;
      SearchOutcome out = std::move(*results[k]);
      out.attempts = start + k + 1;
      const bool tail_free_of_osc = out.subtorus.tail() == TailPolicy::fixed_at_base ||
                                    f.tail_osc_bound(out.subtorus.horizon()).value_or(1.0) == 0.0;
      if (out.exact && out.exact_osc && tail_free_of_osc && *out.exact_osc >= 8.0 * eps) {
        throw InvariantViolation("CRITICAL: accepted subtorus has oscillation " + std::to_string(*out.exact_osc) +
                                 " >= 8 eps = " + std::to_string(8.0 * eps) + "; this is a bug in the implementation");
      }
      return out;
    }
  }
  throw SearchExhausted("no accepted subtorus after " + std::to_string(opt.max_attempts) +
                        " attempts; for a 1-Lipschitz input this has probability at most 2^-" +
                        std::to_string(opt.max_attempts));
}

struct SpectrumStage {
  double eps = 0.0;         // target oscillation bound for this torus
  double search_eps = 0.0;  // eps / 8, passed to the subtorus search
  SearchOutcome outcome;
  double mean = 0.0;        // integral of the normalised f over the torus
  std::optional<MCEstimate> mean_estimate;
};

struct SpectrumTrace {
  double scale = 1.0;  // original f = scale * normalised f
  std::vector<SpectrumStage> stages;
  bool cauchy_holds = true;  // |a_m - a_n| < eps_n for all m > n (normalised units)
  double max_cauchy_ratio = 0.0;  // max |a_m - a_n| / eps_n
};

struct SpectrumValue {
  double a = 0.0;          // in the units of the original f
  double error_bar = 0.0;  // scale * last eps
  double certifying_eps = 0.0;
  SubtorusSpec certifying_subtorus;
};

struct SpectrumResult {
  SpectrumTrace trace;
  SpectrumValue value;
};

struct SpectrumOptions {
  std::size_t mc_samples = 4000;
  std::size_t mean_samples = 20000;
  unsigned workers = 1;
  std::size_t max_attempts = 64;
};

namespace detail {

inline void check_nested(const SubtorusSpec& outer, const SubtorusSpec& inner, std::size_t stage) {
  const auto fail = [stage](const std::string& what) {
    throw InvariantViolation("spectrum stage " + std::to_string(stage) + ": " + what);
  };
  for (std::size_t i : inner.free()) {
    if (!outer.is_free(i)) fail("free index " + std::to_string(i) + " is pinned in the enclosing torus");
  }
  if (inner.tail() == TailPolicy::free_with_tail_bound &&
      (outer.tail() != TailPolicy::free_with_tail_bound || inner.horizon() < outer.horizon())) {
    fail("free tail escapes the enclosing torus");
  }
  for (std::size_t i = 1; i <= outer.horizon(); ++i) {
    if (outer.is_free(i)) continue;
    if (inner.is_free(i) || inner.fixed_value(i) != outer.fixed_value(i)) {
      fail("pinned value at index " + std::to_string(i) + " not inherited");
    }
  }
}

}  // namespace detail

/// Nested tori T_1 ⊇ T_2 ⊇ ... with oscillation of the normalised f below
/// eps_n on T_n, and a_n the mean over T_n. Every torus keeps a free tail so
/// the next search has room for its blocks.
inline SpectrumResult spectrum_iterate(const FunctionPtr& f, const std::vector<double>& eps_schedule,
                                       const DualExponent& d, const std::vector<std::size_t>& block_schedule,
                                       const RandomStream& rng, const SpectrumOptions& opt = {}) {
  if (eps_schedule.empty()) throw ValidationError("spectrum: empty eps schedule");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    const double e = eps_schedule[k];
    if (!(e > 0.0 && e < 4.0)) throw ValidationError("spectrum: every eps must lie in (0, 4)");
    if (k > 0 && !(e < eps_schedule[k - 1])) throw ValidationError("spectrum: eps schedule must strictly decrease");
  }
  if (block_schedule.empty() || (block_schedule.size() != 1 && block_schedule.size() != eps_schedule.size())) {
    throw ValidationError("spectrum: give one block count, or one per stage");
  }

  const NormalizedFunction norm = normalize_to_unit_lipschitz(f, d);
  const TorusFunction& g = *norm.function;
  SpectrumResult result;
  result.trace.scale = norm.factor;

  std::optional<SubtorusSpec> parent;
  for (std::size_t s = 0; s < eps_schedule.size(); ++s) {
    SpectrumStage stage;
    stage.eps = eps_schedule[s];
    stage.search_eps = stage.eps / 8.0;
    SearchOptions so;
    so.tail = TailPolicy::free_with_tail_bound;
    so.parent = parent;
    so.mc_samples = opt.mc_samples;
    so.workers = opt.workers;
    so.max_attempts = opt.max_attempts;
    const std::size_t k = block_schedule.size() == 1 ? block_schedule[0] : block_schedule[s];
    try {
      stage.outcome = find_subtorus(g, stage.search_eps, d, k, rng.substream(2 * s), so);
    } catch (const SearchExhausted& e) {
      throw SearchExhausted("spectrum stage " + std::to_string(s + 1) + ": " + e.what());
    }
    const SubtorusSpec& torus = stage.outcome.subtorus;
    if (parent) detail::check_nested(*parent, torus, s + 1);
    if (auto m = g.exact_mean(torus)) {
      stage.mean = *m;
    } else {
      MCOptions mo;
      mo.workers = opt.workers;
      mo.dim = evaluation_dim(g, torus);
      const auto eval = [&g](const TorusPoint& x) { return g.eval(x); };
      stage.mean_estimate = mc_integral(eval, torus, opt.mean_samples, rng.substream(2 * s + 1), mo);
      stage.mean = stage.mean_estimate->mean();
    }
    parent = torus;
    result.trace.stages.push_back(std::move(stage));
  }

  const auto& st = result.trace.stages;
  for (std::size_t n = 0; n < st.size(); ++n) {
    for (std::size_t m = n + 1; m < st.size(); ++m) {
      const double ratio = std::abs(st[m].mean - st[n].mean) / st[n].eps;
      result.trace.max_cauchy_ratio = std::max(result.trace.max_cauchy_ratio, ratio);
      if (!(ratio < 1.0)) result.trace.cauchy_holds = false;
    }
  }
  const SpectrumStage& last = st.back();
  result.value.a = norm.factor * last.mean;
  result.value.error_bar = norm.factor * last.eps;
  result.value.certifying_eps = last.search_eps;
  result.value.certifying_subtorus = last.outcome.subtorus;
  return result;
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_SEARCH_HPP
