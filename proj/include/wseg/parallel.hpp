#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace wseg {

/// Resolve a worker count: 0 means one per hardware thread.
inline unsigned resolve_threads(unsigned requested)
{
  if (requested != 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Worker count from WSEG_THREADS (unset or unparsable -> 1, 0 -> auto).
inline unsigned threads_from_env()
{
  const char * value = std::getenv("WSEG_THREADS");
  if (value == nullptr || *value == '\0') {
    return 1;
  }
  try {
    const unsigned long parsed = std::stoul(value);
    return resolve_threads(static_cast<unsigned>(std::min(parsed, 1024ul)));
  } catch (const std::exception &) {
    return 1;
  }
}

/**
 * Run fn(i) for every i in [0, count), split into contiguous chunks over
 * at most `threads` workers. Each index is visited exactly once, so callers
 * that write only to slot i get schedule-independent results.
 */
template<class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn && fn)
{
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, begin, end, w] {
      try {
        for (std::size_t i = begin; i < end; ++i) {
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto & t : pool) {
    t.join();
  }
  for (auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace wseg
