#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nids {

/// Worker count: min(hardware_concurrency, NIDS_THREADS if set). At least 1.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) across worker threads. fn must be safe to run
/// concurrently for distinct i; results keyed by i keep output deterministic
/// regardless of scheduling. Exceptions are rethrown on the caller thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nids
