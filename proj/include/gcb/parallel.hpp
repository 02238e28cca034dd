#pragma once

#include <cstddef>
#include <functional>

namespace gcb {

/// Worker count for data-parallel loops; 0 selects the hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Results must be written to per-index slots.
/// The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gcb
