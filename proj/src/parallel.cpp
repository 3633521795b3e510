#include "adsanosov/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ads {

namespace {
std::atomic<unsigned> g_cap{0};

unsigned env_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* s = std::getenv("ADSANOSOV_THREADS")) {
    try {
      const long v = std::stol(s);
      if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    } catch (...) {
    }
  }
  return hw;
}
}  // namespace

unsigned thread_count() {
  const unsigned cap = g_cap.load();
  const unsigned env = env_threads();
  return cap == 0 ? env : std::min(cap, env);
}

void set_thread_cap(unsigned cap) { g_cap.store(cap); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  const unsigned T = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (T <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard lk(mu);
        if (!err) err = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < T; ++t) pool.emplace_back(worker);
  pool.clear();
  if (err) std::rethrow_exception(err);
}

}  // namespace ads
