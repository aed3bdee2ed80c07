#pragma once

#include <cstddef>
#include <functional>

namespace starlens {

// Number of worker threads used by parallel loops. Defaults to the hardware
// concurrency, capped by the STARLENS_THREADS environment variable.
std::size_t thread_count();

// Runs body(i) for i in [0, count). Iterations are split into contiguous
// blocks, one per thread; each index is visited exactly once, so any
// per-index output is deterministic regardless of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace starlens
