#pragma once

#include <cstddef>
#include <functional>

namespace nfkit {

// Worker count: NFKIT_THREADS if set to a positive integer, else the hardware count.
unsigned thread_count();

// Runs body(i) for i in [0, n) over thread_count() workers. Each index is
// visited exactly once; the first exception thrown is rethrown in the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace nfkit
