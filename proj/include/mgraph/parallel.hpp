#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mgraph {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> value{0};
  return value;
}
}  // namespace detail

/// Worker count used by parallel loops: explicit setting, else MGRAPH_THREADS,
/// else hardware concurrency.
inline unsigned thread_count() {
  if (unsigned t = detail::thread_setting().load()) return t;
  if (const char* env = std::getenv("MGRAPH_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return static_cast<unsigned>(t);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// 0 restores the default.
inline void set_thread_count(unsigned t) { detail::thread_setting().store(t); }

class ScopedThreadCount {
 public:
  explicit ScopedThreadCount(unsigned t) : saved_(detail::thread_setting().load()) { set_thread_count(t); }
  ~ScopedThreadCount() { set_thread_count(saved_); }
  ScopedThreadCount(const ScopedThreadCount&) = delete;
  ScopedThreadCount& operator=(const ScopedThreadCount&) = delete;

 private:
  unsigned saved_;
};

/*
 * Runs body(worker, i) for i in [0, count) over contiguous static blocks.
 * make_state(worker) builds per-worker scratch (e.g. a Bfs). Callers write
 * results into slot i, so the outcome never depends on the worker count.
 */
template <class MakeState, class Body>
void parallel_for(std::size_t count, MakeState&& make_state, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    auto state = make_state(0u);
    for (std::size_t i = 0; i < count; ++i) body(state, i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        auto state = make_state(w);
        std::size_t begin = count * w / workers;
        std::size_t end = count * (w + 1) / workers;
        for (std::size_t i = begin; i < end; ++i) body(state, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mgraph
