// Acceptance battery: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "torus_spectrum/torus_spectrum.hpp"

namespace ts = torus_spectrum;
using ts::CosineSeries;
using ts::DualExponent;
using ts::RandomStream;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Cosine with the given shape, scaled by delta.
std::shared_ptr<CosineSeries> cosine(const std::vector<double>& shape, double delta,
                                     const std::vector<double>& phases = {}) {
  std::vector<double> a = shape;
  for (double& x : a) x *= delta;
  std::vector<double> ph = phases;
  if (!ph.empty()) ph.resize(a.size(), 0.0);
  return std::make_shared<CosineSeries>(std::move(a), std::move(ph));
}

// Equal coefficients on indices first..last with Lipschitz constant exactly 1.
std::shared_ptr<CosineSeries> flat(std::size_t first, std::size_t last, const DualExponent& d) {
  std::vector<double> a(last, 0.0);
  const double m = static_cast<double>(last - first + 1);
  const double norm = std::pow(m, 1.0 / d.q());  // ||(1,...,1)||_q
  for (std::size_t i = first; i <= last; ++i) a[i - 1] = 1.0 / (2 * kPi * norm);
  return std::make_shared<CosineSeries>(std::move(a));
}

std::shared_ptr<const ts::TorusFunction> unit(const std::shared_ptr<const ts::TorusFunction>& f, const DualExponent& d) {
  return ts::normalize_to_unit_lipschitz(f, d).function;
}

// ---------------------------------------------------------------------------

Outcome constants_suite() {
  Outcome o;
  std::size_t checks = 0, mc_checks = 0;
  double worst_rel = 0.0, worst_sigma = 0.0;
  for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
    for (unsigned n = 0; n <= 10; ++n) {
      // closed form through tgamma (the library works through lgamma)
      double closed;
      if (std::isinf(p)) {
        closed = std::pow(2.0, n);
      } else if (p == 1.0) {
        closed = std::pow(2.0, n) / std::tgamma(n + 1.0);
      } else {
        closed = std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), n) / std::tgamma(1.0 + n / p);
      }
      const double v = ts::lp_ball_volume(n, p).value();
      const double rel = std::abs(v - closed) / closed;
      worst_rel = std::max(worst_rel, rel);
      o.require(rel <= 1e-12, fmt("omega(%u, %g) = %.17g vs closed form %.17g", n, p, v, closed));
      ++checks;
      if (n == 0 || n > 6) continue;
      // hit-or-miss in the cube [-1, 1]^n
      RandomStream rng(1000 + n, static_cast<std::uint64_t>(std::isinf(p) ? 99 : p * 10));
      const std::size_t N = 400000;
      std::size_t hits = 0;
      std::vector<double> x(n);
      for (std::size_t t = 0; t < N; ++t) {
        for (double& c : x) c = 2.0 * rng.uniform() - 1.0;
        hits += ts::lp_norm(x, p) <= 1.0;
      }
      const double frac = static_cast<double>(hits) / N;
      const double est = std::pow(2.0, n) * frac;
      const double se = std::pow(2.0, n) * std::sqrt(frac * (1 - frac) / N);
      // p = inf: every draw hits and the spread vanishes
      const double sig = se > 0 ? std::abs(est - v) / se : (std::abs(est - v) <= 1e-12 * v ? 0.0 : kInf);
      worst_sigma = std::max(worst_sigma, sig);
      o.require(sig <= 3.0, fmt("omega(%u, %g): MC %.6f vs %.6f (%.2f sigma)", n, p, est, v, sig));
      ++mc_checks;
    }
  }
  const DualExponent d2(2.0);
  const auto b1 = ts::block_size(1, 0.25, d2).count, b2 = ts::block_size(2, 0.25, d2).count;
  o.require(b1 && b2 && *b1 == 64 && *b2 == 2048, "block sizes at (0.25, 2) differ from [64, 2048]");
  o.detail = fmt("%zu closed-form checks (worst rel %.1e), %zu MC checks (worst %.2f sigma), blocks [%llu, %llu]",
                 checks, worst_rel, mc_checks, worst_sigma, static_cast<unsigned long long>(b1.value_or(0)),
                 static_cast<unsigned long long>(b2.value_or(0)));
  return o;
}

Outcome morrey_certification() {
  Outcome o;
  const DualExponent d(2.0);
  const std::vector<double> shape{1.0, -0.6, 0.35};
  const std::vector<double> phases{0.1, 0.37, 0.8};
  std::size_t cases = 0, certified = 0, failed_cases = 0;
  double worst_ratio = 0.0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::vector<double> sh(shape.begin(), shape.begin() + static_cast<long>(n));
    for (double eps : {0.1, 0.25, 0.4}) {
      const auto base = cosine(sh, 1.0, phases);
      const double v1 = ts::morrey_hypothesis(*base, n, eps, d, ts::MorreyMode::finite_torus).value.value();
      const double lip1 = base->lipschitz_constant(d);
      for (double target : {0.05, 0.3, 0.7, 1.0}) {
        double delta = std::pow(target / v1, 1.0 / d.q());  // the value scales like delta^q
        delta = std::min(delta, 1.0 / lip1);  // stay 1-Lipschitz
        const auto f = cosine(sh, delta, phases);
        const ts::MorreyCertificate c = ts::check_morrey(*f, n, eps, d, ts::MorreyMode::finite_torus);
        ++cases;
        o.require(c.hypothesis.value.value() <= 1.0 + 1e-12, fmt("n=%zu eps=%g: hypothesis value above 1", n, eps));
        o.require(c.grid_osc.has_value(), "grid oracle missing");
        if (c.grid_osc) {
          worst_ratio = std::max(worst_ratio, c.grid_osc->lower / (8 * eps));
          o.require(c.grid_osc->lower < 8 * eps, fmt("n=%zu eps=%g: grid osc %.4f >= 8 eps", n, eps, c.grid_osc->lower));
        }
        certified += c.verdict == ts::MorreyVerdict::certified;
      }
      // deliberately violate the hypothesis while staying 1-Lipschitz
      const double delta_bad = 1.0 / lip1;
      const auto g = cosine(sh, delta_bad, phases);
      const ts::MorreyCertificate c = ts::check_morrey(*g, n, eps, d, ts::MorreyMode::finite_torus);
      const std::string verdict = ts::to_string(c.verdict);
      if (c.hypothesis.value.value() > 1.0) {
        ++failed_cases;
        o.require(verdict == "hypothesis-failed", fmt("n=%zu eps=%g: violating delta gave %s", n, eps, verdict.c_str()));
      }
      o.require(verdict.find("counterexample") == std::string::npos, "verdict claims a counterexample");
    }
  }
  o.require(failed_cases > 0, "no hypothesis-violating case was exercised");
  o.detail = fmt("%zu hypothesis-satisfying cases (%zu certified, max grid osc / 8eps = %.4f), %zu violating cases "
                 "reported hypothesis-failed",
                 cases, certified, worst_ratio, failed_cases);
  return o;
}

Outcome chain_simulator() {
  Outcome o;
  const std::size_t chains = 10000;
  std::size_t configs = 0, ks_tests = 0;
  double min_p = 1.0, worst_mean_ratio = 0.0;
  struct Config {
    std::size_t n;
    double eps;
    double p;
    std::vector<double> start;
  };
  const std::vector<Config> configs_list{
      {1, 0.25, 2.0, {0.0}},           {2, 0.25, 2.0, {0.0, 0.0}},       {2, 0.1, 1.5, {0.3, 0.9}},
      {3, 0.4, 2.0, {0.5, 0.5, 0.5}},  {3, 0.25, kInf, {0.1, 0.2, 0.7}}, {3, 0.1, 4.0, {0.0, 0.0, 0.0}},
  };
  for (std::size_t k = 0; k < configs_list.size(); ++k) {
    const Config& cf = configs_list[k];
    const DualExponent d(cf.p);
    // hypothesis value about 0.8 (finite form), 1-Lipschitz
    const std::vector<double> shape{1.0, 0.5, 0.25};
    const auto base = cosine({shape.begin(), shape.begin() + static_cast<long>(cf.n)}, 1.0, {0.2, 0.4, 0.6});
    const double v1 = ts::morrey_hypothesis(*base, cf.n, cf.eps, d, ts::MorreyMode::finite_torus).value.value();
    const double delta = std::min(std::pow(0.8 / v1, 1.0 / d.q()), 1.0 / base->lipschitz_constant(d));
    const auto f = cosine({shape.begin(), shape.begin() + static_cast<long>(cf.n)}, delta, {0.2, 0.4, 0.6});
    const ts::ChainReport r = ts::chain_statistics(*f, cf.n, cf.eps, d, ts::TorusPoint(std::span<const double>(cf.start)),
                                                   chains, RandomStream(2024, k));
    ++configs;
    const std::string tag = fmt("n=%zu eps=%g p=%g", cf.n, cf.eps, cf.p);
    // (a) almost-sure step bound
    for (const auto& L : r.levels) {
      o.require(L.max_ball_increment <= L.radius + 1e-9,
                tag + fmt(": level %zu increment %.3g > radius %.3g", L.level, L.max_ball_increment, L.radius));
      o.require(L.max_ball_dist <= L.radius * (1 + 1e-12), tag + ": ball step left the ball");
    }
    // (b) endpoint marginals
    for (const auto& u : r.endpoint_uniformity) {
      ++ks_tests;
      min_p = std::min(min_p, u.ks.p_value);
      o.require(u.ks.p_value > 0.001, tag + fmt(": KS p-value %.2g for coordinate %zu", u.ks.p_value, u.index));
    }
    // (c) mean increment
    o.require(r.hypothesis_status == ts::HypothesisStatus::holds, tag + ": hypothesis should hold");
    const double upper = r.abs_diff.confidence_interval().second;
    worst_mean_ratio = std::max(worst_mean_ratio, upper / (4 * cf.eps));
    o.require(upper < 4 * cf.eps, tag + fmt(": CI upper %.4f >= 4 eps", upper));
  }
  o.detail = fmt("%zu configurations x %zu chains; %zu KS tests (min p %.3g); max CI upper / 4eps = %.4f", configs,
                 chains, ks_tests, min_p, worst_mean_ratio);
  return o;
}

// Criteria 4 and 5 share the searches.
void search_battery(Outcome& rate, Outcome& osc) {
  const double floor = 0.5 - 3 * std::sqrt(0.25 / 2000);
  const std::size_t trials = 2000;
  double worst_rate = 1.0, worst_osc = 0.0;
  std::size_t configs = 0, accepted_total = 0;
  for (double p : {2.0, kInf}) {
    const DualExponent d(p);
    std::vector<std::pair<std::string, std::shared_ptr<const ts::TorusFunction>>> inputs{
        {"single", flat(1, 1, d)},
        {"flat8", flat(1, 8, d)},
        {"flat20", flat(1, 20, d)},
        {"block1+2", flat(20, 80, d)},
        {"mixed", unit(std::make_shared<CosineSeries>(std::vector<double>{0.3, -0.2, 0.1, 0.05, 0.05, 0.02},
                                                      std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, 0.0,
                                                      ts::GeometricTail{0.97, 6, 0.03}),
                       d)},
    };
    for (double eps : {0.25, 0.4}) {
      // extremal input: as many equal block-1 coefficients as the Lipschitz budget
      // allows while each one alone still pushes the statistic past 1/2
      const double mq = ts::sine_abs_moment(d.q());
      const double c1 = ts::morrey_weight(1, eps, d).value();
      const auto m = static_cast<std::size_t>(std::ceil(2 * c1 * mq)) - 1;
      auto cases = inputs;
      cases.emplace_back(fmt("extremal%zu", m), flat(1, m, d));
      for (std::size_t K : {1u, 2u}) {
        for (const auto& [name, f] : cases) {
          std::size_t first = 0;
          for (std::size_t t = 0; t < trials; ++t) {
            const RandomStream rng = RandomStream(4040, configs).substream(t);
            const ts::SearchOutcome c0 = ts::draw_candidate(*f, eps, d, K, rng.substream(0));
            first += c0.accepted;
            const ts::SearchOutcome s = ts::find_subtorus(*f, eps, d, K, rng);
            osc.require(s.accepted && s.exact_osc.has_value(), name + ": accepted search without oracle value");
            if (s.exact_osc) {
              worst_osc = std::max(worst_osc, *s.exact_osc / (8 * eps));
              osc.require(*s.exact_osc < 8 * eps, fmt("%s eps=%g K=%zu: osc %.4f >= 8 eps", name.c_str(), eps, K, *s.exact_osc));
            }
            ++accepted_total;
          }
          const double r = static_cast<double>(first) / trials;
          worst_rate = std::min(worst_rate, r);
          rate.require(r >= floor, fmt("%s p=%g eps=%g K=%zu: first-draw rate %.4f < %.4f", name.c_str(), p, eps, K, r, floor));
          ++configs;
        }
      }
    }
  }
  rate.detail = fmt("%zu configurations x %zu trials; lowest first-draw acceptance %.4f (floor %.4f)", configs, trials,
                    worst_rate, floor);
  osc.detail = fmt("%zu accepted searches; max exact osc / 8eps = %.4f", accepted_total, worst_osc);
}

Outcome spectrum_trace() {
  Outcome o;
  const DualExponent d(2.0);
  std::size_t runs = 0;
  double worst = 0.0;
  const std::vector<std::vector<double>> schedules{{0.4, 0.3, 0.25}, {0.4, 0.2, 0.1}, {0.3, 0.25, 0.2, 0.15}};
  const std::vector<ts::FunctionPtr> inputs{
      std::make_shared<CosineSeries>(std::vector<double>{0.3, -0.2, 0.1, 0.05}, std::vector<double>{0.1, 0.2, 0.3, 0.4}, 0.5),
      std::make_shared<CosineSeries>(std::vector<double>(30, 0.02), std::vector<double>{}, -0.25),
      std::make_shared<CosineSeries>(std::vector<double>{0.1}, std::vector<double>{}, 0.0, ts::GeometricTail{0.999, 1, 0.01}),
      std::make_shared<ts::FiniteGridFunction>(std::vector<std::size_t>{3, 3},
                                               std::vector<double>{0, 0.1, 0.2, 0.1, 0.3, 0.2, 0.0, 0.05, 0.1}),
  };
  for (std::size_t si = 0; si < schedules.size(); ++si) {
    for (std::size_t fi = 0; fi < inputs.size(); ++fi) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        ts::SpectrumOptions opt;
        opt.mc_samples = 2000;
        opt.mean_samples = 2000;
        const ts::SpectrumResult r = ts::spectrum_iterate(inputs[fi], schedules[si], d, {1}, RandomStream(seed, si * 10 + fi), opt);
        ++runs;
        const auto& st = r.trace.stages;
        for (std::size_t n = 0; n < st.size(); ++n) {
          for (std::size_t m = n + 1; m < st.size(); ++m) {
            const double ratio = std::abs(st[m].mean - st[n].mean) / st[n].eps;
            worst = std::max(worst, ratio);
            o.require(ratio < 1.0, fmt("input %zu schedule %zu: |a_%zu - a_%zu| = %.4g >= eps_%zu", fi, si, m + 1, n + 1,
                                       std::abs(st[m].mean - st[n].mean), n + 1));
          }
        }
      }
    }
  }
  std::size_t constants = 0;
  for (double c : {0.0, 0.37, -2.5, 1e-3}) {
    const auto f = std::make_shared<CosineSeries>(std::vector<double>{}, std::vector<double>{}, c);
    const ts::SpectrumResult r = ts::spectrum_iterate(f, {0.4, 0.3, 0.25}, d, {1}, RandomStream(5));
    o.require(r.value.a == c, fmt("constant %g came back as %.17g", c, r.value.a));
    ++constants;
  }
  o.detail = fmt("%zu traces, max |a_m - a_n| / eps_n = %.4f; %zu constants recovered exactly", runs, worst, constants);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto f = std::make_shared<CosineSeries>(std::vector<double>{0.05, -0.03, 0.02}, std::vector<double>{0.1, 0.2, 0.3});
  const ts::SubtorusSpec torus = ts::SubtorusSpec::full(3);
  std::string counts;
  for (double p : {1.5, 2.0, 4.0}) {
    const DualExponent d(p);
    std::size_t within = 0;
    for (std::size_t rep = 0; rep < 100; ++rep) {
      const std::size_t i = 1 + rep % 3;
      const auto g = [&](const ts::TorusPoint& x) { return std::pow(std::abs(f->partial(i, x)), d.q()); };
      const ts::MCEstimate e = ts::mc_integral(g, torus, 4000, RandomStream(7, rep).substream(static_cast<std::uint64_t>(p * 10)));
      within += std::abs(e.mean() - *f->exact_partial_qnorm(i, d)) <= 3 * e.std_error();
    }
    o.require(within >= 99, fmt("p=%g: only %zu of 100 repetitions within 3 sigma", p, within));
    counts += fmt("%s%zu/100 (p=%g)", counts.empty() ? "" : ", ", within, p);
  }
  std::size_t brackets = 0;
  RandomStream rng(77);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int t = 0; t < 5; ++t) {
      std::vector<double> a(n), ph(n);
      for (std::size_t k = 0; k < n; ++k) {
        a[k] = 0.1 * (rng.uniform() - 0.5);
        ph[k] = rng.uniform();
      }
      const CosineSeries g(a, ph);
      const double exact = *g.exact_osc(ts::SubtorusSpec::full(n));
      const std::size_t r = ts::uniform_resolution(n, 2e5);
      const ts::OscBracket b = ts::grid_oracle_osc(g, n, std::vector<std::size_t>(n, r), DualExponent(2.0));
      o.require(b.lower <= exact + 1e-12 && exact <= b.upper + 1e-12,
                fmt("n=%zu: bracket [%.6f, %.6f] misses %.6f", n, b.lower, b.upper, exact));
      ++brackets;
    }
  }
  o.detail = "MC vs closed form within 3 sigma: " + counts + fmt("; %zu grid brackets contain the exact osc", brackets);
  return o;
}

Outcome determinism(const std::filesystem::path& samples) {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "torus_spectrum_acceptance";
  std::filesystem::create_directories(dir);
  const auto flat_json = dir / "flat.json";
  std::ofstream(flat_json) << R"({"family": "cosine", "coeffs": [0.03, 0.03, 0.03, 0.03, 0.03], "offset": 0.2})";

  std::vector<ts::RunConfig> configs;
  const auto make = [&](const std::string& cmd, const std::filesystem::path& fn) {
    ts::RunConfig c;
    c.command = cmd;
    c.function_path = fn.string();
    c.seed = 31337;
    return c;
  };
  ts::RunConfig c = make("volumes", {});
  c.n = 10;
  configs.push_back(c);
  c = make("blocks", {});
  configs.push_back(c);
  c = make("weights", {});
  c.count = 40;
  configs.push_back(c);
  c = make("morrey-check", samples / "grid2.json");  // grid: Monte Carlo hypothesis
  c.samples = 20000;
  configs.push_back(c);
  c = make("morrey-check", samples / "cosine.json");
  c.n = 3;
  configs.push_back(c);
  c = make("chain", samples / "cosine.json");
  c.n = 3;
  c.chains = 10000;
  c.samples = 5000;
  configs.push_back(c);
  c = make("find-subtorus", flat_json);
  c.blocks = {2};
  configs.push_back(c);
  c = make("find-subtorus", samples / "grid2.json");
  c.samples = 4000;
  configs.push_back(c);
  c = make("spectrum", samples / "cosine_tail.json");
  configs.push_back(c);
  c = make("spectrum", samples / "grid2.json");
  c.samples = 4000;
  configs.push_back(c);
  c = make("oracle", samples / "cosine.json");
  configs.push_back(c);

  std::size_t compared = 0;
  for (ts::RunConfig cfg : configs) {
    std::string first;
    for (unsigned workers : {1u, 2u, 4u, 7u}) {
      cfg.workers = workers;
      std::ostringstream out, err;
      const int code = ts::run(cfg, out, err);
      if (code != ts::kExitOk) {
        o.require(false, cfg.command + fmt(" exited with %d: ", code) + err.str());
        break;
      }
      const std::string results = ts::json::parse(out.str())["results"].dump();
      if (first.empty()) {
        first = results;
      } else {
        o.require(results == first, cfg.command + fmt(": results with %u workers differ from 1 worker", workers));
        ++compared;
      }
    }
    // a second run with the same worker count
    std::ostringstream out, err;
    cfg.workers = 1;
    if (ts::run(cfg, out, err) == ts::kExitOk) {
      o.require(ts::json::parse(out.str())["results"].dump() == first, cfg.command + ": rerun differs");
    }
  }
  // library level: the searches of criterion 4 under parallel candidate batches
  const DualExponent d(2.0);
  const auto f = flat(1, 20, d);
  for (std::uint64_t s = 0; s < 50; ++s) {
    ts::SearchOptions one, many;
    many.workers = 6;
    const auto a = ts::find_subtorus(*f, 0.25, d, 2, RandomStream(s), one);
    const auto b = ts::find_subtorus(*f, 0.25, d, 2, RandomStream(s), many);
    o.require(ts::to_json(a).dump() == ts::to_json(b).dump(), fmt("search seed %llu differs across workers",
                                                                  static_cast<unsigned long long>(s)));
    ++compared;
  }
  o.detail = fmt("%zu commands x workers {1,2,4,7} plus reruns, %zu comparisons, all bit-identical", configs.size(), compared);
  if (!o.pass) o.detail = fmt("%zu commands compared", configs.size());
  return o;
}

using Clock = std::chrono::steady_clock;

bool report(int id, const std::string& title, const Outcome& o, double seconds, double limit) {
  const bool in_time = limit <= 0 || seconds < limit;
  const bool ok = o.pass && in_time;
  std::printf("criterion %d: %s  %s -- %s [%.1fs%s]\n", id, ok ? "PASS" : "FAIL", title.c_str(), o.detail.c_str(),
              seconds, limit > 0 ? fmt(", limit %.0fs", limit).c_str() : "");
  for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
  if (!in_time) std::printf("    runtime over limit\n");
  std::fflush(stdout);
  return ok;
}

template <typename F>
std::pair<Outcome, double> timed(F&& f) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  return {o, std::chrono::duration<double>(Clock::now() - t0).count()};
}

}  // namespace

int main() {
  bool all = true;
  {
    auto [o, s] = timed(constants_suite);
    all &= report(1, "ball volumes and block sizes", o, s, 30);
  }
  {
    auto [o, s] = timed(morrey_certification);
    all &= report(2, "oscillation certificates on T^n", o, s, 120);
  }
  {
    auto [o, s] = timed(chain_simulator);
    all &= report(3, "random chain simulator", o, s, 120);
  }
  {
    Outcome rate, osc;
    const auto t0 = Clock::now();
    try {
      search_battery(rate, osc);
    } catch (const std::exception& e) {
      rate.pass = osc.pass = false;
      rate.detail = osc.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    all &= report(4, "first-draw acceptance rate", rate, s, 120);
    all &= report(5, "oscillation on found subtori", osc, s, 120);
  }
  {
    auto [o, s] = timed(spectrum_trace);
    all &= report(6, "nested spectrum trace", o, s, 180);
  }
  {
    auto [o, s] = timed(oracle_equivalence);
    all &= report(7, "Monte Carlo and grid oracles agree with closed forms", o, s, 0);
  }
  {
    auto [o, s] = timed([] { return determinism(TORUS_SPECTRUM_SAMPLES_DIR); });
    all &= report(8, "results independent of worker count", o, s, 0);
  }
  return all ? 0 : 1;
}
