#pragma once

#include <cstddef>
#include <functional>

namespace parnn {

/// Runs fn(i) for i in [0, count) on up to `threads` worker threads
/// (0 = hardware concurrency). Each index is processed exactly once and
/// callers must write results into per-index slots; combined with ordered
/// reduction afterwards this keeps results identical for any thread count.
/// The first exception thrown by any task is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &fn,
                  unsigned threads = 0);

/// Process-wide default used when parallel_for is called with threads == 0.
/// 0 restores hardware concurrency. Returns the previous setting.
unsigned set_default_threads(unsigned threads);

} // namespace parnn
