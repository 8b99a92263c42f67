#pragma once

#include <cstddef>
#include <functional>

namespace imexstab {

/// IMEX_STAB_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
int configured_thread_count();

/// Calls body(i) for i in [0, count) on up to `threads` worker threads
/// (0 means configured_thread_count()). Work items must be independent.
/// The first exception thrown by any item is rethrown after all workers
/// have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int threads = 0);

}  // namespace imexstab
