#pragma once

#include <cstddef>
#include <functional>

namespace sublevel_ph {

/// Worker count: hardware concurrency, capped by SUBLEVEL_PH_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on worker_count() threads. Work items are
/// claimed dynamically; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sublevel_ph
