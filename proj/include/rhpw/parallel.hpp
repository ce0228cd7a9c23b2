#pragma once

#include <functional>

namespace rhpw {

// Worker count used by parallel_for; 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Calls f(i) for i in [0, n). Each index is handled by exactly one worker,
// so writes to per-index slots need no locking and results do not depend
// on the worker count. Nested calls from a worker run serially.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace rhpw
