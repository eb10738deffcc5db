#pragma once

#include <cstddef>
#include <functional>

namespace ballslep {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Each index is processed exactly once, so results written to
/// per-index slots do not depend on the worker count. The first exception
/// thrown by any worker is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int resolve_threads(int requested);

}  // namespace ballslep
