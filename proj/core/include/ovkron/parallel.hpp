#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace ovkron {

/// Resolves a job-count request: values <= 0 mean "use all hardware threads".
inline int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Indices are
/// distributed statically so output written to slot i is deterministic
/// regardless of scheduling. Exceptions from workers are rethrown in the
/// calling thread (first one wins).
inline void parallel_for(int jobs, std::int64_t count,
                         const std::function<void(std::int64_t)>& fn) {
  jobs = resolve_jobs(jobs);
  if (jobs <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  int workers = static_cast<int>(std::min<std::int64_t>(jobs, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::int64_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ovkron
