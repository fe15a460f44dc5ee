#pragma once

#include <cstddef>
#include <functional>

namespace tactile {

// Calls fn(i) for i in [0, count) on up to `threads` workers (0 or 1 runs
// inline). The first exception thrown by any call is rethrown after all
// workers have joined.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace tactile
