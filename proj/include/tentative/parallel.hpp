#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <type_traits>
#include <vector>

#include "tentative/random.hpp"

namespace tentative {

/// Replicate count, base seed and worker count for a resampling run.
/// threads == 0 uses the hardware concurrency.
struct ReplicatePlan {
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Evaluates fn(index, gen) for every replicate index, where gen is
/// substream(plan.seed, index). The result vector is in replicate order and
/// does not depend on the number of threads.
template <typename Fn>
auto run_replicates(const ReplicatePlan& plan, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t, SeededGenerator&>> {
  using Result = std::invoke_result_t<Fn&, std::size_t, SeededGenerator&>;
  const std::size_t n = plan.replicates;
  std::vector<Result> out(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SeededGenerator gen = substream(plan.seed, i);
      out[i] = fn(i, gen);
    }
  };

  unsigned threads = plan.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : plan.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n / 256, 1)));
  if (threads <= 1) {
    work(0, n);
    return out;
  }

  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace tentative
