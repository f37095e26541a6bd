#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace simperm {

// Runs fn(begin, end, worker) over contiguous chunks of [0, count). Results
// must be written per index (or merged in worker order) so the outcome does
// not depend on the thread count.
template <class Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn) {
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count));
  if (t <= 1) {
    if (count) fn(std::size_t{0}, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(t);
  const std::size_t chunk = (count + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(count, b + chunk);
    pool.emplace_back([&, b, e, w] {
      try {
        if (b < e) fn(b, e, static_cast<int>(w));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int default_threads();

}  // namespace simperm
