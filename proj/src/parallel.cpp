#include "zslab/parallel.hpp"

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zslab {

void parallel_for(const Parallelism& par, std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, par.threads < 1 ? 1 : static_cast<std::size_t>(par.threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

bool MonotoneMax::offer(int candidate) {
  int cur = value_.load(std::memory_order_relaxed);
  while (candidate > cur)
    if (value_.compare_exchange_weak(cur, candidate, std::memory_order_relaxed)) return true;
  return false;
}

Budget::Budget(std::optional<double> seconds) {
  if (seconds) {
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(*seconds));
  }
}

bool Budget::expired() {
  if (stopped()) return true;
  if (!deadline_) return false;
  if (calls_.fetch_add(1, std::memory_order_relaxed) % 256 != 0) return false;
  if (std::chrono::steady_clock::now() >= *deadline_) {
    stop();
    return true;
  }
  return false;
}

} // namespace zslab
