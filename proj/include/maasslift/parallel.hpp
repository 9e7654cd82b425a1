// Deterministic fork-join helpers.
//
// Work is split into indexed tasks; workers compute task results
// independently and the merge happens on the calling thread in ascending
// task order, so the result is identical for any thread count.
#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ml {

inline long& thread_count_ref() {
  static long n = 0;  // 0 = use hardware concurrency
  return n;
}

inline void set_thread_count(long n) { thread_count_ref() = n > 0 ? n : 0; }

inline long effective_thread_count() {
  long n = thread_count_ref();
  if (n > 0) return n;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<long>(hc) : 1;
}

// Computes per_task(i) for i in [0, ntasks) and folds the results into
// acc via merge(acc, result_i) in ascending i.  R must be movable.
template <typename R, typename PerTask, typename Merge>
void parallel_tasks(long ntasks, R& acc, PerTask&& per_task, Merge&& merge) {
  if (ntasks <= 0) return;
  long nthreads = effective_thread_count();
  if (nthreads > ntasks) nthreads = ntasks;
  if (nthreads <= 1) {
    for (long i = 0; i < ntasks; ++i) {
      R r = per_task(i);
      merge(acc, r);
    }
    return;
  }
  std::vector<R> results(static_cast<size_t>(ntasks));
  std::atomic<long> next(0);
  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= ntasks) return;
      results[static_cast<size_t>(i)] = per_task(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nthreads));
  for (long t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (long i = 0; i < ntasks; ++i) merge(acc, results[static_cast<size_t>(i)]);
}

}  // namespace ml
