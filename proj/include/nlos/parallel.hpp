#pragma once

#include <cstddef>
#include <functional>

namespace nlos {

// Runs fn(i) for i in [0, n); with threads <= 1 this is a plain loop.
// Iterations must write disjoint state.  Exceptions from workers are
// rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace nlos
