#ifndef BOUNDPOP_PARALLEL_HPP
#define BOUNDPOP_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace boundpop {

// Calls body(i) for i in [0, n) on up to `threads` workers. Work is handed
// out by index, so any per-index output is independent of scheduling.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body &&body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
              failure = std::current_exception();
            next.store(n);
          }
        }
      });
  }
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace boundpop

#endif
