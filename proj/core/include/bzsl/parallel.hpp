#pragma once

#include <cstddef>
#include <functional>

namespace bzsl {

// Worker cap: BIDI_ZSL_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t max_threads();

// Runs fn(0..n-1) on up to `threads` workers (0 means max_threads()). Each
// index writes its own result slot, so output does not depend on scheduling.
// If any call throws, the exception from the lowest failing index is rethrown
// after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace bzsl
