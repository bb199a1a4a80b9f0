#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace lacuna {

/// Resolves a requested worker count. 0 means "use LACUNA_THREADS, else 1".
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LACUNA_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

/// Sums f(0) + ... + f(count-1). Work is split into contiguous chunks, one
/// per thread, and the partial sums are combined in chunk order, so exact
/// value types give identical results for any thread count.
template <class T, class F>
T parallel_sum(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    T acc{};
    for (std::size_t i = 0; i < count; ++i) acc += f(i);
    return acc;
  }
  std::vector<T> partial(threads, T{});
  std::vector<std::exception_ptr> failures(threads);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      try {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += f(i);
        partial[t] = std::move(acc);
      } catch (...) {
        failures[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : failures)
    if (e) std::rethrow_exception(e);
  T total{};
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace lacuna
