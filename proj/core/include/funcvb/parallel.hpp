#ifndef FUNCVB_PARALLEL_HPP_
#define FUNCVB_PARALLEL_HPP_

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace funcvb {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index
// owns its output slot, so results are deterministic regardless of
// scheduling. The first exception thrown by any task is rethrown on the
// calling thread after all workers join.
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  workers = std::min(workers, count);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace funcvb

#endif  // FUNCVB_PARALLEL_HPP_
