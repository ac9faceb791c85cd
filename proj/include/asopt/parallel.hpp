#pragma once

#include <cstddef>
#include <functional>

namespace asopt {

// Worker count from ASOPT_WORKERS (falls back to hardware concurrency, >= 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n) on a bounded pool of threads. Each index is
// executed exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. Nested calls run serially on the
// calling worker. The first exception (lowest index) is rethrown after all
// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace asopt
