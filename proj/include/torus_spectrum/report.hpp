#ifndef TORUS_SPECTRUM_REPORT_HPP
#define TORUS_SPECTRUM_REPORT_HPP

// Batch entry point behind the command-line tool: validates a RunConfig,
// runs one pipeline and writes a JSON report
//   {"command", "config", "results", "wall_time_s", "version"}.
// Exit codes: 0 ok, 2 invalid input, 3 search exhausted, 70 internal
// invariant broken (a bug), 1 anything else.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "torus_spectrum/constants.hpp"
#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/function.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/grid_oracle.hpp"
#include "torus_spectrum/json_io.hpp"
#include "torus_spectrum/morrey.hpp"
#include "torus_spectrum/random.hpp"
#include "torus_spectrum/search.hpp"

#ifndef TORUS_SPECTRUM_VERSION
#define TORUS_SPECTRUM_VERSION "0.1.0"
#endif

namespace torus_spectrum {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitExhausted = 3;
inline constexpr int kExitInvariant = 70;

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"volumes", "weights", "blocks", "morrey-check",
                                          "chain",   "find-subtorus", "spectrum", "oracle"};
  return c;
}

struct RunConfig {
  std::string command;
  std::string function_path;
  double p = 2.0;
  double eps = 0.25;
  std::vector<double> eps_schedule{0.4, 0.3, 0.25};
  std::size_t n = 2;
  std::size_t count = 2;
  std::vector<std::size_t> blocks{1};
  std::string mode = "finite";
  std::string tail = "fixed";
  std::vector<double> start;  // chain start point; empty means the origin
  std::size_t samples = 20000;
  std::size_t chains = 10000;
  std::size_t max_attempts = 64;
  std::size_t grid_resolution = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double z = MCEstimate::kZ95;
  std::string subtorus_path;  // oracle: optional subtorus query
  std::string out_dir;
  std::string csv_path;
  std::string emit_subtorus;
};

inline json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"function", c.function_path},
          {"p", real_to_json(c.p)},
          {"eps", c.eps},
          {"eps_schedule", c.eps_schedule},
          {"n", c.n},
          {"count", c.count},
          {"blocks", c.blocks},
          {"mode", c.mode},
          {"tail", c.tail},
          {"start", c.start},
          {"samples", c.samples},
          {"chains", c.chains},
          {"max_attempts", c.max_attempts},
          {"grid_resolution", c.grid_resolution},
          {"seed", c.seed},
          {"workers", c.workers},
          {"z", c.z},
          {"subtorus", c.subtorus_path},
          {"out_dir", c.out_dir},
          {"csv", c.csv_path},
          {"emit_subtorus", c.emit_subtorus}};
}

namespace detail {

inline std::filesystem::path artifact_path(const RunConfig& c, const std::string& name) {
  std::filesystem::path p = name;
  if (p.is_relative() && !c.out_dir.empty()) {
    std::filesystem::create_directories(c.out_dir);
    p = std::filesystem::path(c.out_dir) / p;
  }
  return p;
}

inline void write_json_file(const std::filesystem::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw ValidationError("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

inline FunctionPtr require_function(const RunConfig& c) {
  if (c.function_path.empty()) throw ValidationError(c.command + ": --fn is required");
  return load_function(c.function_path);
}

inline void check_positive(std::size_t v, const char* what) {
  if (v == 0) throw ValidationError(std::string(what) + " must be positive");
}

inline json value_rows(std::size_t first, std::size_t last, const std::function<LogReal(std::size_t)>& value) {
  json rows = json::array();
  for (std::size_t i = first; i <= last; ++i) {
    const LogReal v = value(i);
    rows.push_back({{"index", i}, {"value", real_to_json(v.value())}, {"log10_value", real_to_json(v.log10_magnitude())}});
  }
  return rows;
}

inline json run_volumes(const RunConfig& c) {
  const DualExponent d(c.p);  // the tool works with metric exponents only
  return value_rows(0, c.n, [&](std::size_t k) { return lp_ball_volume(static_cast<unsigned>(k), d); });
}

inline json run_weights(const RunConfig& c) {
  const DualExponent d(c.p);
  check_positive(c.count, "--count");
  return value_rows(1, c.count, [&](std::size_t i) { return morrey_weight(static_cast<unsigned>(i), c.eps, d); });
}

inline json run_blocks(const RunConfig& c) {
  const DualExponent d(c.p);
  check_positive(c.count, "--count");
  json rows = json::array();
  for (std::size_t k = 1; k <= c.count; ++k) {
    const BlockSize bs = block_size(static_cast<unsigned>(k), c.eps, d);
    json row = {{"index", k}, {"exact", bs.count.has_value()},
                {"log10_value", real_to_json(bs.log_count().log10_magnitude())}};
    row["value"] = bs.count ? json(*bs.count) : real_to_json(bs.raw.value());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json run_morrey_check(const RunConfig& c) {
  const DualExponent d(c.p);
  const FunctionPtr f = require_function(c);
  check_positive(c.n, "--n");
  CheckOptions o;
  o.hypothesis.samples = c.samples;
  o.hypothesis.rng = RandomStream(c.seed);
  o.hypothesis.workers = c.workers;
  o.workers = c.workers;
  o.grid_resolution = c.grid_resolution;
  return to_json(check_morrey(*f, c.n, c.eps, d, morrey_mode_from_string(c.mode), o));
}

inline json run_chain_command(const RunConfig& c) {
  const DualExponent d(c.p);
  const FunctionPtr f = require_function(c);
  check_positive(c.n, "--n");
  TorusPoint start(c.n);
  if (!c.start.empty()) {
    if (c.start.size() != c.n) throw ValidationError("--start needs exactly n coordinates");
    start = TorusPoint(std::span<const double>(c.start));
  }
  ChainOptions o;
  o.workers = c.workers;
  o.keep_endpoints = !c.csv_path.empty();
  o.hypothesis_samples = c.samples;
  const ChainReport r = chain_statistics(*f, c.n, c.eps, d, start, c.chains, RandomStream(c.seed), o);
  json j = to_json(r, c.z);
  j["start"] = to_json(start);
  if (!c.csv_path.empty()) {
    const auto path = artifact_path(c, c.csv_path);
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << "trial";
    for (std::size_t i = 1; i <= c.n; ++i) out << ",x" << i;
    out << ",value\n" << std::setprecision(17);
    for (std::size_t t = 0; t < r.endpoints.size(); ++t) {
      out << t;
      for (double v : r.endpoints[t].values()) out << ',' << v;
      out << ',' << r.endpoint_values[t] << '\n';
    }
  }
  return j;
}

inline json run_find_subtorus(const RunConfig& c) {
  const DualExponent d(c.p);
  const FunctionPtr f = require_function(c);
  if (c.blocks.size() != 1) throw ValidationError("find-subtorus: --blocks takes a single count");
  check_positive(c.blocks[0], "--blocks");
  SearchOptions o;
  o.tail = tail_policy_from_string(c.tail);
  o.mc_samples = c.samples;
  o.workers = c.workers;
  o.max_attempts = c.max_attempts;
  const SearchOutcome out = find_subtorus(*f, c.eps, d, c.blocks[0], RandomStream(c.seed), o);
  if (!c.emit_subtorus.empty()) write_json_file(artifact_path(c, c.emit_subtorus), to_json(out.subtorus));
  return to_json(out);
}

inline json run_spectrum(const RunConfig& c) {
  const DualExponent d(c.p);
  const FunctionPtr f = require_function(c);
  SpectrumOptions o;
  o.mc_samples = c.samples;
  o.mean_samples = c.samples;
  o.workers = c.workers;
  o.max_attempts = c.max_attempts;
  const SpectrumResult r = spectrum_iterate(f, c.eps_schedule, d, c.blocks, RandomStream(c.seed), o);
  if (!c.emit_subtorus.empty()) {
    write_json_file(artifact_path(c, c.emit_subtorus), to_json(r.value.certifying_subtorus));
  }
  return to_json(r);
}

inline json run_oracle(const RunConfig& c) {
  const DualExponent d(c.p);
  const FunctionPtr f = require_function(c);
  const std::size_t sup = f->support();
  const std::size_t horizon = sup == kUnboundedSupport ? std::max<std::size_t>(c.n, 1) : std::max<std::size_t>(sup, 1);
  const std::string unsupported_osc = "unsupported oracle: exact osc";
  json j = {{"family", f->family()}, {"lipschitz", f->lipschitz_constant(d)}, {"horizon", horizon}};
  j["support"] = sup == kUnboundedSupport ? json("unbounded") : json(sup);
  j["tail_osc_bound"] = f->tail_osc_bound(horizon) ? real_to_json(*f->tail_osc_bound(horizon)) : json(nullptr);
  json qn = json::array();
  for (std::size_t i = 1; i <= horizon; ++i) {
    const auto v = f->exact_partial_qnorm(i, d);
    qn.push_back({{"index", i}, {"value", v ? real_to_json(*v) : json("unsupported oracle: partial q-norm")}});
  }
  j["partial_qnorms"] = std::move(qn);
  const auto full = f->exact_osc(SubtorusSpec::full(horizon));
  j["osc_full"] = full ? real_to_json(*full) : json(unsupported_osc);
  if (!c.subtorus_path.empty()) {
    std::ifstream in(c.subtorus_path);
    if (!in) throw ValidationError("cannot open subtorus spec " + c.subtorus_path);
    json sj;
    try {
      sj = json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed subtorus spec: ") + e.what());
    }
    const SubtorusSpec sub = subtorus_from_json(sj);
    const auto osc = f->exact_osc(sub);
    const auto mean = f->exact_mean(sub);
    j["osc_subtorus"] = osc ? real_to_json(*osc) : json(unsupported_osc);
    j["mean_subtorus"] = mean ? real_to_json(*mean) : json("unsupported oracle: exact mean");
  }
  return j;
}

}  // namespace detail

/// Runs one command; the report goes to `out`, diagnostics to `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  json results;
  try {
    if (config.workers == 0) throw ValidationError("--workers must be positive");
    if (!(config.z > 0.0)) throw ValidationError("--z must be positive");
    const std::string& cmd = config.command;
    if (cmd == "volumes") {
      results = detail::run_volumes(config);
    } else if (cmd == "weights") {
      results = detail::run_weights(config);
    } else if (cmd == "blocks") {
      results = detail::run_blocks(config);
    } else if (cmd == "morrey-check") {
      results = detail::run_morrey_check(config);
    } else if (cmd == "chain") {
      results = detail::run_chain_command(config);
    } else if (cmd == "find-subtorus") {
      results = detail::run_find_subtorus(config);
    } else if (cmd == "spectrum") {
      results = detail::run_spectrum(config);
    } else if (cmd == "oracle") {
      results = detail::run_oracle(config);
    } else {
      throw ValidationError("unknown command \"" + cmd + "\"");
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SearchExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const json report = {{"command", config.command},
                       {"config", to_json(config)},
                       {"results", std::move(results)},
                       {"wall_time_s", wall},
                       {"version", TORUS_SPECTRUM_VERSION}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_REPORT_HPP
