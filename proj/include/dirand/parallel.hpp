#pragma once

#include <cstddef>
#include <functional>

namespace dirand {

// Runs fn(i) for i in [0, n) on up to `threads` workers, in contiguous
// chunks. fn must only write state owned by index i. The first exception
// thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

} // namespace dirand
