#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ued {

/// Thread cap from the UED_FORGE_THREADS environment variable (default 1).
inline int threads_from_env() {
  const char* raw = std::getenv("UED_FORGE_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  try {
    return std::max(1, std::stoi(raw));
  } catch (const std::exception&) {
    return 1;
  }
}

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on each.
/// Chunks are disjoint, so callers that write only to their own range get
/// results independent of the thread count.
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    if (n > 0) fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  const std::size_t base = n / workers;
  const std::size_t extra = n % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + base + (w < extra ? 1 : 0);
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ued
