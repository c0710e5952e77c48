#pragma once

#include <cstddef>
#include <functional>

namespace mml {

// Global worker cap for grid sweeps.  0 restores the default
// (hardware concurrency).  Results are independent of the thread count:
// every parallel_for writes to disjoint preallocated slots.
void set_threads(int k);
int threads();

// Runs fn(i) for i in [0, count) on up to threads() workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace mml
