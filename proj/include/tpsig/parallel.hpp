#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tpsig {

// Effective worker count: the requested count (or hardware concurrency when
// requested == 0), capped by the TPSIG_THREADS environment variable when that
// is set to a positive integer. Always at least 1.
inline unsigned thread_budget(unsigned requested = 0) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned n = requested ? requested : hw;
  if (const char* env = std::getenv("TPSIG_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      n = std::min<unsigned long>(n, static_cast<unsigned long>(v));
  }
  return std::max(1u, n);
}

// Run f(i) once for every i in [begin, end) across `threads` workers. Work is
// handed out through an atomic counter so unevenly sized items balance. No
// ordering between invocations is implied; callers that need deterministic
// output store per-index results and merge in index order afterwards.
template <class F>
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned threads, F&& f) {
  if (begin >= end) return;
  std::uint64_t count = end - begin;
  unsigned t = static_cast<unsigned>(
      std::min<std::uint64_t>(threads ? threads : 1, count));
  if (t <= 1) {
    for (std::uint64_t i = begin; i < end; ++i) f(i);
    return;
  }
  std::atomic<std::uint64_t> next{begin};
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&next, end, &f] {
      for (;;) {
        std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= end) return;
        f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace tpsig
