#pragma once

#include <cstddef>
#include <functional>

namespace rwpe {

/// Calls `body(i)` for every i in [0, n) on up to `threads` worker threads
/// (0 = hardware concurrency). Work items must be independent. The first
/// exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace rwpe
