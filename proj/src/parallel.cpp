#include "fraclimit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fraclimit {

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACLIMIT_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  parallel_for(count, body, worker_count());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned requested) {
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(requested, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> replicate_pairs(std::int64_t reps, std::uint64_t root, std::size_t width,
                                    const PairBody& body) {
  const auto pairs = static_cast<std::size_t>((std::max<std::int64_t>(reps, 0) + 1) / 2);
  std::vector<double> table(pairs * 2 * width);
  parallel_for(pairs, [&](std::size_t j) {
    std::span<double> rows(table.data() + 2 * j * width, 2 * width);
    body(derive_seed(root, j), rows.first(width), rows.subspan(width));
  });
  table.resize(static_cast<std::size_t>(std::max<std::int64_t>(reps, 0)) * width);
  return table;
}

}  // namespace fraclimit
