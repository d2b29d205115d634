#pragma once

#include <functional>

namespace fsuq {

// Runs body(0..count-1) on up to `workers` threads.  Work items are handed
// out through an atomic counter; determinism is the caller's job and holds
// whenever body(i) writes only to slot i of preallocated storage.  The first
// exception thrown by any item is rethrown after all threads join.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

}  // namespace fsuq
