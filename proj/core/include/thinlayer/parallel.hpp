#pragma once

// Static-partition parallel loop. The worker count comes from
// THINLAYER_THREADS (default: hardware concurrency); THINLAYER_THREADS=1
// runs everything on the calling thread.

#include <functional>

namespace thinlayer {

int thread_count();

/// Calls fn(i) for i in [0, n). Iterations must be independent; each index
/// is visited exactly once. Exceptions from workers are rethrown (the first
/// one by index range).
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace thinlayer
