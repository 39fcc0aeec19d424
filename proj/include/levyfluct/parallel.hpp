#pragma once

#include <cstddef>
#include <functional>

namespace levyfluct {

/// Worker count: LEVYFLUCT_THREADS if set, else hardware concurrency.
int thread_count();

/// Runs fn(begin, end) over [0, n) split into fixed-size blocks handed to a
/// worker pool. The block partition does not depend on the worker count, and
/// each block is computed serially, so results that are written per-index are
/// identical for any thread count.
void parallel_blocks(std::size_t n, std::size_t block,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace levyfluct
