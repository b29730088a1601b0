#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace conelef {

/// Worker count from CONE_LEFSCHETZ_THREADS; unset or 0 means hardware concurrency.
std::size_t configured_threads();

/// Runs body(i) for i in [0, n). Work is claimed dynamically but every result
/// must be written to slot i, so the outcome does not depend on scheduling.
/// If bodies throw, the exception of the lowest index is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t threads = configured_threads()) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace conelef
