#pragma once

#include <functional>

namespace specfilt {

// Worker count: SPECFILT_THREADS if set (clamped to >= 1), otherwise the
// hardware concurrency.
int worker_count();

/// Runs fn(0..count-1) across worker threads. Tasks must write only to their
/// own output slots; results are then independent of scheduling, which keeps
/// parallel runs identical to serial ones. The first exception thrown by any
/// task is rethrown after all workers join.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace specfilt
