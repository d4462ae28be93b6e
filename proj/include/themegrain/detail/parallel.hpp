#pragma once

#include <cstdint>
#include <functional>

namespace themegrain::detail {

// Thread budget for data-parallel loops. Controlled by THEMEGRAIN_THREADS;
// 0 or unset means one thread per hardware core.
int thread_budget();

// Runs fn(begin, end) over contiguous chunks of [begin, end). Chunks are
// assigned in index order; with a budget of 1 this degenerates to a plain
// call. Reductions that depend on chunk boundaries must be merged by the
// caller in chunk order to keep results reproducible for a fixed budget.
void parallel_chunks(std::int64_t begin, std::int64_t end,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace themegrain::detail
