#ifndef BIMSYNTH_PARALLEL_H_
#define BIMSYNTH_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace bimsynth {

// Worker count from BIMSYNTH_WORKERS, else the hardware concurrency (>= 1).
int default_worker_count();

// Runs fn(i) for every i in [0, n) on up to `workers` threads. Items are
// handed out in contiguous blocks; callers must write only to state owned by
// item i so results do not depend on scheduling. The first exception thrown
// by any item is rethrown after all threads join.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace bimsynth

#endif  // BIMSYNTH_PARALLEL_H_
