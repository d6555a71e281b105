#ifndef TORUS_SPECTRUM_PARALLEL_HPP
#define TORUS_SPECTRUM_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace torus_spectrum {

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Splits [0, count) into contiguous ranges and runs body(begin, end, worker)
/// on up to `workers` threads. The first exception thrown is rethrown here.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  const std::size_t used = std::min<std::size_t>(workers, std::max<std::size_t>(count, 1));
  if (used <= 1) {
    body(std::size_t{0}, count, 0u);
    return;
  }
  std::vector<std::exception_ptr> errors(used);
  {
    std::vector<std::jthread> threads;
    threads.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
      const std::size_t begin = count * w / used;
      const std::size_t end = count * (w + 1) / used;
      threads.emplace_back([&, begin, end, w] {
        try {
          body(begin, end, static_cast<unsigned>(w));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace torus_spectrum

#endif  // TORUS_SPECTRUM_PARALLEL_HPP
