#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace noon {

/// Worker count: NOON_COHERENCE_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Overrides the worker count for this process (0 restores the default).
void set_worker_count(std::size_t count);

/// Calls fn(i) for i in [0, count) across worker threads. Each index writes
/// only its own result slot, so output never depends on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace noon
