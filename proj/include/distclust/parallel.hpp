#pragma once

#include <cstddef>
#include <functional>

namespace distclust {

/// Worker cap: DISTCLUST_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned default_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically; the first exception thrown is rethrown after all
/// workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace distclust
