#pragma once

#include <cstddef>
#include <functional>

namespace spinflow {

/// Worker cap from SPINFLOW_THREADS (defaults to the hardware concurrency).
int thread_count();

/// Runs body(begin, end) over a static partition of [0, n). Each index is
/// handled by exactly one call, so per-index writes are deterministic for
/// any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace spinflow
