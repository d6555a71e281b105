// torus-spectrum: command-line front end. Every subcommand prints one JSON
// report on stdout; see `torus-spectrum <command> --help`.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "torus_spectrum/report.hpp"

namespace ts = torus_spectrum;

namespace {

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument(s);
  return v;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TORUS_SPECTRUM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric TORUS_SPECTRUM_SEED\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillation certificates, subtorus search and spectrum values for Lipschitz functions on the "
               "infinite-dimensional torus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TORUS_SPECTRUM_VERSION);

  ts::RunConfig cfg;
  cfg.seed = default_seed();
  cfg.workers = ts::default_workers();
  std::string p_text = "2";

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--p", p_text, "metric exponent p (number or 'inf')")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed (default: $TORUS_SPECTRUM_SEED or 0)")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "worker threads; results do not depend on it")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str();
    sub->add_option("--z", cfg.z, "confidence multiplier for reported intervals")->capture_default_str();
    sub->add_option("--out-dir", cfg.out_dir, "directory for CSV/JSON artifacts");
  };
  const auto with_fn = [&](CLI::App* sub) {
    sub->add_option("--fn", cfg.function_path, "function spec (JSON)")->required()->check(CLI::ExistingFile);
  };

  auto* volumes = app.add_subcommand("volumes", "volumes of unit l_p balls in dimensions 0..n");
  common(volumes);
  volumes->add_option("--n", cfg.n, "largest dimension")->capture_default_str();

  auto* weights = app.add_subcommand("weights", "Morrey weights c(eps, p, i) for i = 1..count");
  common(weights);
  weights->add_option("--eps", cfg.eps, "oscillation scale eps in (0, 1/2)")->capture_default_str();
  weights->add_option("--count", cfg.count, "number of indices")->capture_default_str();

  auto* blocks = app.add_subcommand("blocks", "block sizes of the subtorus search");
  common(blocks);
  blocks->add_option("--eps", cfg.eps, "oscillation scale eps in (0, 1/2)")->capture_default_str();
  blocks->add_option("--count", cfg.count, "number of blocks")->capture_default_str();

  auto* morrey = app.add_subcommand("morrey-check", "certify osc(f; T^n) < 8 eps from the derivative hypothesis");
  common(morrey);
  with_fn(morrey);
  morrey->add_option("--n", cfg.n, "torus dimension")->capture_default_str();
  morrey->add_option("--eps", cfg.eps, "oscillation scale eps in (0, 1/2)")->capture_default_str();
  morrey->add_option("--mode", cfg.mode, "finite (threshold 1) or infinite (threshold 1/2)")
      ->check(CLI::IsMember({"finite", "infinite"}))
      ->capture_default_str();
  morrey->add_option("--grid-resolution", cfg.grid_resolution, "grid oracle nodes per axis (0: auto)");

  auto* chain = app.add_subcommand("chain", "simulate the random chain and test the law of its endpoint");
  common(chain);
  with_fn(chain);
  chain->add_option("--n", cfg.n, "torus dimension")->capture_default_str();
  chain->add_option("--eps", cfg.eps, "oscillation scale eps in (0, 1/2)")->capture_default_str();
  chain->add_option("--chains", cfg.chains, "independent chains")->capture_default_str();
  chain->add_option("--start", cfg.start, "start point, comma separated (default: origin)")->delimiter(',');
  chain->add_option("--csv", cfg.csv_path, "write chain endpoints as CSV");

  auto* find = app.add_subcommand("find-subtorus", "randomized search for a subtorus with osc < 8 eps");
  common(find);
  with_fn(find);
  find->add_option("--eps", cfg.eps, "oscillation scale eps in (0, 1/2)")->capture_default_str();
  find->add_option("--blocks", cfg.blocks, "number of blocks K")->expected(1)->capture_default_str();
  find->add_option("--max-attempts", cfg.max_attempts, "draws before reporting exhaustion")->capture_default_str();
  find->add_option("--tail", cfg.tail, "coordinates past the horizon: fixed or free")
      ->check(CLI::IsMember({"fixed", "free"}))
      ->capture_default_str();
  find->add_option("--emit-subtorus", cfg.emit_subtorus, "write the found subtorus spec here");

  auto* spectrum = app.add_subcommand("spectrum", "nested subtori and the spectrum value a");
  common(spectrum);
  with_fn(spectrum);
  spectrum->add_option("--eps-seq", cfg.eps_schedule, "strictly decreasing oscillation targets")
      ->delimiter(',')
      ->capture_default_str();
  spectrum->add_option("--blocks", cfg.blocks, "blocks per stage (one value, or one per stage)")
      ->delimiter(',')
      ->capture_default_str();
  spectrum->add_option("--max-attempts", cfg.max_attempts, "draws before reporting exhaustion")->capture_default_str();
  spectrum->add_option("--emit-subtorus", cfg.emit_subtorus, "write the certifying subtorus spec here");

  auto* oracle = app.add_subcommand("oracle", "exact quantities for functions that support them");
  common(oracle);
  with_fn(oracle);
  oracle->add_option("--n", cfg.n, "horizon for unbounded-support families")->capture_default_str();
  oracle->add_option("--subtorus", cfg.subtorus_path, "subtorus spec (JSON) to query")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
    cfg.p = parse_exponent(p_text);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ts::kExitInvalid;
  } catch (const std::exception&) {
    std::cerr << "error: --p must be a number or 'inf' (got \"" << p_text << "\")\n";
    return ts::kExitInvalid;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return ts::run(cfg, std::cout, std::cerr);
}
