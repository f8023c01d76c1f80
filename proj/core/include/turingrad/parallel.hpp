#pragma once

#include <cstddef>
#include <functional>

namespace turingrad {

// Worker count: hardware concurrency, capped by the TR_THREADS environment variable.
std::size_t thread_cap();

// Runs fn(i) for i in [0, count) on up to thread_cap() threads.
// The first exception thrown by fn is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace turingrad
