#ifndef TORUS_SPECTRUM_JSON_IO_HPP
#define TORUS_SPECTRUM_JSON_IO_HPP

// JSON forms of points, subtori, function specs and results.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"  // nlohmann/json, vendored

#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/function.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/grid_oracle.hpp"
#include "torus_spectrum/log_real.hpp"
#include "torus_spectrum/morrey.hpp"
#include "torus_spectrum/search.hpp"
#include "torus_spectrum/statistics.hpp"

namespace torus_spectrum {

using json = nlohmann::json;

/// Finite numbers as numbers; infinities as "inf"/"-inf"; NaN as null.
inline json real_to_json(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double real_from_json(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
  }
  throw ValidationError(what + ": expected a number");
}

inline json log_real_to_json(const LogReal& x) {
  return {{"value", real_to_json(x.value())}, {"log10_value", real_to_json(x.log10_magnitude())}};
}

inline json to_json(const TorusPoint& x) {
  return json(std::vector<double>(x.values().begin(), x.values().end()));
}

inline json to_json(const SubtorusSpec& s) {
  json fixed = json::object();
  for (const auto& [i, v] : s.fixed_map()) fixed[std::to_string(i)] = v;
  return {{"horizon", s.horizon()}, {"free", s.free()}, {"fixed", std::move(fixed)}, {"tail", to_string(s.tail())}};
}

inline SubtorusSpec subtorus_from_json(const json& j) {
  try {
    const auto horizon = j.at("horizon").get<std::size_t>();
    auto free = j.at("free").get<std::vector<std::size_t>>();
    std::map<std::size_t, double> fixed;
    for (const auto& [k, v] : j.at("fixed").items()) {
      std::size_t pos = 0;
      const unsigned long long index = std::stoull(k, &pos);
      if (pos != k.size()) throw ValidationError("subtorus: fixed key \"" + k + "\" is not an index");
      fixed[static_cast<std::size_t>(index)] = v.get<double>();
    }
    const TailPolicy tail = tail_policy_from_string(j.value("tail", std::string("fixed")));
    return SubtorusSpec(horizon, std::move(free), fixed, tail);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("subtorus spec: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw;
    throw ValidationError(std::string("subtorus spec: ") + e.what());
  }
}

inline json to_json(const MCEstimate& e, double z = MCEstimate::kZ95) {
  const auto [lo, hi] = e.confidence_interval(z);
  return {{"mean", real_to_json(e.mean())},
          {"n", e.count()},
          {"stderr", real_to_json(e.std_error())},
          {"ci", {real_to_json(lo), real_to_json(hi)}},
          {"z", z},
          {"non_finite", e.non_finite()}};
}

inline json to_json(const OscBracket& b) {
  return {{"lower", real_to_json(b.lower)}, {"upper", real_to_json(b.upper)}};
}

namespace detail {

inline std::vector<double> read_grid_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open values file " + path.string());
  std::vector<double> values;
  const auto ext = path.extension().string();
  if (ext == ".bin" || ext == ".f64") {
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % sizeof(double) != 0) throw ValidationError("binary values file size is not a multiple of 8");
    in.seekg(0);
    values.resize(bytes / sizeof(double));
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
    return values;
  }
  std::string token;
  std::stringstream all;
  all << in.rdbuf();
  std::string text = all.str();
  for (char& c : text) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream ss(text);
  while (ss >> token) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(token, &pos));
      if (pos != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ValidationError("values file " + path.string() + ": bad number \"" + token + "\"");
    }
  }
  return values;
}

}  // namespace detail

/// Builds a function from its JSON spec; relative values_file paths resolve
/// against `base_dir`.
inline FunctionPtr function_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  try {
    const auto family = j.at("family").get<std::string>();
    if (family == "cosine") {
      auto coeffs = j.at("coeffs").get<std::vector<double>>();
      auto phases = j.value("phases", std::vector<double>{});
      const double offset = j.value("offset", 0.0);
      std::optional<GeometricTail> tail;
      if (j.contains("tail") && !j.at("tail").is_null()) {
        const json& t = j.at("tail");
        if (t.value("type", std::string("geometric")) != "geometric") {
          throw ValidationError("cosine tail: only \"geometric\" is supported");
        }
        tail = GeometricTail{t.at("ratio").get<double>(), t.value("from", coeffs.size()), t.value("scale", 1.0)};
      }
      return std::make_shared<CosineSeries>(std::move(coeffs), std::move(phases), offset, tail);
    }
    if (family == "grid") {
      const auto n = j.at("n").get<std::size_t>();
      std::vector<std::size_t> res;
      if (j.at("resolution").is_array()) {
        res = j.at("resolution").get<std::vector<std::size_t>>();
      } else {
        res.assign(n, j.at("resolution").get<std::size_t>());
      }
      if (res.size() != n) throw ValidationError("grid: resolution needs n entries");
      std::vector<double> values;
      if (j.contains("values")) {
        values = j.at("values").get<std::vector<double>>();
      } else {
        std::filesystem::path p = j.at("values_file").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        values = detail::read_grid_values(p);
      }
      return std::make_shared<FiniteGridFunction>(std::move(res), std::move(values));
    }
    throw ValidationError("unknown function family \"" + family + "\"");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("function spec: ") + e.what());
  }
}

inline FunctionPtr load_function(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open function spec " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("malformed function spec " + path.string() + ": " + e.what());
  }
  return function_from_json(j, path.parent_path());
}

inline json function_to_json(const TorusFunction& f) {
  if (const auto* c = dynamic_cast<const CosineSeries*>(&f)) {
    json j = {{"family", "cosine"}, {"coeffs", c->coeffs()}, {"offset", c->offset()}};
    if (!c->phases().empty()) j["phases"] = c->phases();
    if (c->tail()) {
      j["tail"] = {{"type", "geometric"}, {"ratio", c->tail()->ratio}, {"from", c->tail()->from},
                   {"scale", c->tail()->scale}};
    }
    return j;
  }
  if (const auto* g = dynamic_cast<const FiniteGridFunction*>(&f)) {
    return {{"family", "grid"}, {"n", g->dim()}, {"resolution", g->resolution()}, {"values", g->values()}};
  }
  return {{"family", f.family()}};
}

inline json to_json(const HypothesisValue& h) {
  json j = {{"exact", h.exact},
            {"value", real_to_json(h.value.value())},
            {"log10_value", real_to_json(h.value.log10_magnitude())},
            {"threshold", h.threshold},
            {"status", to_string(h.status)}};
  json terms = json::array();
  for (double t : h.terms) terms.push_back(real_to_json(t));
  j["terms"] = std::move(terms);
  if (h.estimate) j["estimate"] = to_json(*h.estimate);
  return j;
}

inline json to_json(const MorreyCertificate& c) {
  json j = {{"eps", c.eps},
            {"p", real_to_json(c.p)},
            {"n", c.n},
            {"mode", to_string(c.mode)},
            {"hypothesis", to_json(c.hypothesis)},
            {"osc_bound", c.osc_bound},
            {"measured_osc", to_json(c.measured_osc)},
            {"verdict", to_string(c.verdict)}};
  j["exact_osc"] = c.exact_osc ? real_to_json(*c.exact_osc) : json(nullptr);
  if (c.grid_osc) {
    j["grid_osc"] = to_json(*c.grid_osc);
    j["grid_resolution"] = c.grid_resolution;
  } else {
    j["grid_osc"] = nullptr;
  }
  return j;
}

inline json to_json(const ChainReport& r, double z = MCEstimate::kZ95) {
  json levels = json::array();
  for (const auto& L : r.levels) {
    levels.push_back({{"level", L.level},
                      {"radius", L.radius},
                      {"line_increment", to_json(L.line_increment, z)},
                      {"max_ball_increment", L.max_ball_increment},
                      {"max_ball_dist", L.max_ball_dist}});
  }
  json unif = json::array();
  for (const auto& u : r.endpoint_uniformity) {
    unif.push_back({{"index", u.index}, {"ks_statistic", u.ks.statistic}, {"ks_p_value", u.ks.p_value}});
  }
  const auto ci = r.abs_diff.confidence_interval(z);
  return {{"n", r.n},
          {"eps", r.eps},
          {"chains", r.chains},
          {"exploratory", r.exploratory},
          {"hypothesis_status", to_string(r.hypothesis_status)},
          {"abs_diff", to_json(r.abs_diff, z)},
          {"bound", r.bound},
          {"below_bound", ci.second < r.bound},
          {"levels", std::move(levels)},
          {"endpoint_uniformity", std::move(unif)},
          {"max_abs_correlation", r.max_abs_correlation},
          {"correlation_threshold", r.correlation_threshold}};
}

inline json to_json(const SearchOutcome& o) {
  json terms = json::array();
  for (double t : o.terms) terms.push_back(real_to_json(t));
  json j = {{"eps", o.eps},
            {"blocks", o.blocks},
            {"indices", o.indices},
            {"exact", o.exact},
            {"weighted_sum", real_to_json(o.weighted_sum.value())},
            {"log10_weighted_sum", real_to_json(o.weighted_sum.log10_magnitude())},
            {"terms", std::move(terms)},
            {"accepted", o.accepted},
            {"attempts", o.attempts},
            {"osc_bound", 8.0 * o.eps},
            {"subtorus", to_json(o.subtorus)}};
  j["exact_osc"] = o.exact_osc ? real_to_json(*o.exact_osc) : json(nullptr);
  if (o.estimate) j["estimate"] = to_json(*o.estimate);
  return j;
}

inline json to_json(const SpectrumResult& r) {
  json stages = json::array();
  for (const auto& s : r.trace.stages) {
    json st = {{"eps", s.eps}, {"search_eps", s.search_eps}, {"mean", s.mean},
               {"mean_original_units", r.trace.scale * s.mean}, {"outcome", to_json(s.outcome)}};
    if (s.mean_estimate) st["mean_estimate"] = to_json(*s.mean_estimate);
    stages.push_back(std::move(st));
  }
  return {{"trace",
           {{"scale", r.trace.scale},
            {"stages", std::move(stages)},
            {"cauchy_holds", r.trace.cauchy_holds},
            {"max_cauchy_ratio", r.trace.max_cauchy_ratio}}},
          {"spectrum_value",
           {{"a", r.value.a},
            {"error_bar", r.value.error_bar},
            {"certifying_eps", r.value.certifying_eps},
            {"certifying_subtorus", to_json(r.value.certifying_subtorus)}}}};
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_JSON_IO_HPP
