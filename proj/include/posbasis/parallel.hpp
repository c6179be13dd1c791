#pragma once

#include <cstddef>
#include <functional>

namespace posbasis {

/// Worker count from POSBASIS_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Splits [0, count) into contiguous ranges and runs body(begin, end) on each,
/// one range per worker. Exceptions from workers are rethrown on the caller.
void parallel_ranges(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace posbasis
