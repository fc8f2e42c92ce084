#include "catasym/common.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace catasym {

int worker_count() {
  if (const char* env = std::getenv("CATASYM_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

void run_chunked(std::size_t chunk_count,
                 const std::function<void(std::size_t)>& body) {
  const int workers =
      std::min<std::size_t>(worker_count(), chunk_count) > 0
          ? static_cast<int>(std::min<std::size_t>(worker_count(), chunk_count))
          : 1;
  if (workers == 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= chunk_count) return;
        body(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail
}  // namespace catasym
