#pragma once

#include <cstddef>
#include <functional>

namespace swff {

/// Worker count from the SWFF_JOBS environment variable when set, otherwise
/// the number of available cores (at least 1).
int default_jobs();

/// Runs fn(i) for every i in [0, n). jobs == 1 is the plain serial reference
/// path; jobs > 1 dispatches the same index set across OpenMP threads.
/// fn must write only to its own per-index output slot, which makes results
/// independent of scheduling; the first exception thrown by any index is
/// rethrown after the loop drains. jobs <= 0 selects default_jobs().
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace swff
