#pragma once

#include <cstddef>
#include <functional>

namespace enetfp {

/// Worker count used when the caller passes 0: ENET_THREADS if set,
/// otherwise std::thread::hardware_concurrency().
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default).
/// Each index is processed exactly once; callers write results by index so
/// the outcome does not depend on the schedule. The first exception thrown
/// by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace enetfp
