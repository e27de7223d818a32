#pragma once

#include <cstddef>
#include <functional>

namespace spinbayes {

/// Number of worker threads used when a caller passes 0.
unsigned default_threads();

/// Calls body(i) for i in [0, count) on up to `threads` workers (0 = default). Work is handed
/// out by an atomic counter; the first exception thrown by any body is rethrown after all
/// workers have stopped. Results must be written to per-index slots so that the outcome does
/// not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace spinbayes
