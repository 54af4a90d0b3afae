#pragma once

#include <functional>

namespace echolab {

// Runs fn(job) for job = 0..n_jobs-1 on up to `workers` threads pulling from a
// shared counter (shard size 1). Jobs must write only to their own result
// slots; assembly order is then independent of the worker count. workers <= 0
// selects std::thread::hardware_concurrency(). The first exception thrown by
// any job is rethrown on the calling thread after all workers join.
void parallel_for(int n_jobs, int workers, const std::function<void(int)>& fn);

}  // namespace echolab
