#ifndef FLOPART_PARALLEL_HPP
#define FLOPART_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace flopart {

// Worker cap: FLOPART_THREADS when set (floor 1), else hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("FLOPART_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return unsigned(v);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs f(i) for i in [0, count) across the thread budget. Determinism is
// the caller's job: write results into preassigned slots (completion order
// is unspecified). The first exception thrown by any worker is rethrown
// after all workers finish.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  std::size_t workers = std::min<std::size_t>(thread_budget(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace flopart

#endif
