#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fraclimit {

/// Seed of replicate `index` under root seed `root`:
///   splitmix64(root + 0x9E3779B97F4A7C15 * (index + 1)).
/// Replicate results therefore never depend on scheduling or thread count.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

/// Worker count: hardware concurrency, capped by FRACLIMIT_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count) across worker_count() threads. Each index
/// runs exactly once; the first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Same with an explicit number of threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers);

/// Runs body(derive_seed(root, j), row(2j), row(2j + 1)) for j < ceil(reps / 2)
/// and returns the reps x width row-major table of rows. Suited to samplers
/// that yield two independent paths per draw.
using PairBody = std::function<void(std::uint64_t, std::span<double>, std::span<double>)>;
std::vector<double> replicate_pairs(std::int64_t reps, std::uint64_t root, std::size_t width,
                                    const PairBody& body);

}  // namespace fraclimit
