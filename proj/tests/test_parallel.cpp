#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "fraclimit/parallel.hpp"

using namespace fraclimit;

TEST_CASE("derived seeds are distinct and stable") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("parallel_for visits each index once regardless of threads") {
  for (unsigned workers : {1u, 2u, 5u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, workers);
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("results are independent of the thread count") {
  std::vector<double> a(257), b(257);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = static_cast<double>(derive_seed(9, i) % 1000); }, 1);
  parallel_for(b.size(), [&](std::size_t i) { b[i] = static_cast<double>(derive_seed(9, i) % 1000); }, 4);
  CHECK(a == b);
}

TEST_CASE("exceptions propagate from workers") {
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                    if (i == 37) throw std::runtime_error("boom");
                  }, 3),
                  std::runtime_error);
}

TEST_CASE("FRACLIMIT_THREADS caps the worker count") {
  setenv("FRACLIMIT_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  unsetenv("FRACLIMIT_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("replicate_pairs fills rows by seed pair") {
  const auto t = replicate_pairs(5, 3, 2, [](std::uint64_t s, std::span<double> a, std::span<double> b) {
    a[0] = b[0] = static_cast<double>(s % 97);
    a[1] = 0.0;
    b[1] = 1.0;
  });
  REQUIRE(t.size() == 10);
  CHECK(t[0] == t[2]);
  CHECK(t[1] == 0.0);
  CHECK(t[3] == 1.0);
  CHECK(t[8] == static_cast<double>(derive_seed(3, 2) % 97));
}
