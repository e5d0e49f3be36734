#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace folksim {

/// Runs body(worker, i) for i in [0, n). Index i goes to worker i % threads,
/// so the assignment of work never depends on timing.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(0u, i);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += threads) body(w, i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace folksim
