#pragma once

#include <cstddef>
#include <functional>

namespace astra {

/// Worker count: ASTRA_SIM_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Indices are statically partitioned into
/// contiguous blocks, so results written to per-index slots do not depend on
/// the worker count. Exceptions from workers are rethrown on the caller.
/// A call made from inside a worker runs serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace astra
