#pragma once

#include <functional>

namespace dirprec {

/// Worker count: hardware concurrency, capped by the SCATTER_THREADS
/// environment variable when set.
int worker_count();

/// Runs body(worker, i) for i in [begin, end). Indices are dealt round-robin
/// to workers so the assignment is fixed for a given worker count.
void parallel_for(int begin, int end, const std::function<void(int, int)>& body);

}  // namespace dirprec
