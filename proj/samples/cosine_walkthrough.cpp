// Walks one cosine series through the library: certify its oscillation on
// T^2, find a subtorus where it is nearly constant, then estimate its
// spectrum value.

#include <iostream>
#include <memory>

#include "torus_spectrum/torus_spectrum.hpp"

using namespace torus_spectrum;

int main() {
  const DualExponent euclid(2.0);
  auto f = std::make_shared<CosineSeries>(std::vector<double>{0.03, 0.02, 0.01}, std::vector<double>{}, 0.5);
  std::cout << "Lipschitz constant: " << f->lipschitz_constant(euclid) << '\n';

  const MorreyCertificate cert = check_morrey(*f, 2, 0.25, euclid, MorreyMode::finite_torus);
  std::cout << "hypothesis value " << cert.hypothesis.value.value() << " -> " << to_string(cert.verdict)
            << " (osc in [" << cert.measured_osc.lower << ", " << cert.measured_osc.upper << "], bound "
            << cert.osc_bound << ")\n";

  const SearchOutcome found = find_subtorus(*f, 0.25, euclid, 2, RandomStream(7));
  std::cout << "subtorus free indices:";
  for (std::size_t i : found.indices) std::cout << ' ' << i;
  std::cout << "  weighted sum " << found.weighted_sum.value() << ", oscillation " << found.exact_osc.value_or(-1)
            << " after " << found.attempts << " attempt(s)\n";

  const SpectrumResult spec = spectrum_iterate(f, {0.4, 0.3, 0.25}, euclid, {1}, RandomStream(7));
  for (const auto& stage : spec.trace.stages) {
    std::cout << "  eps " << stage.eps << ": mean " << spec.trace.scale * stage.mean << '\n';
  }
  std::cout << "spectrum value a = " << spec.value.a << " +- " << spec.value.error_bar << '\n';
}
