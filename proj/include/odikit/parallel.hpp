#pragma once

#include <functional>

namespace odikit {

/// Runs fn(i) for i in [0, n) across up to `threads` workers, statically
/// chunked so outputs never depend on the thread count. threads <= 1 runs
/// inline.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Default worker count: the ODIKIT_THREADS environment variable if set,
/// otherwise 1.
int default_thread_count();

}  // namespace odikit
