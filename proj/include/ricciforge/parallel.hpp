// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>

namespace ricciforge {

/// Worker cap: RICCIFORGE_THREADS if set, else hardware concurrency. Always >= 1.
int max_threads();

/// Runs fn(i) for i in [0, count). Work items must write to disjoint state;
/// chunking is deterministic so results never depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ricciforge
