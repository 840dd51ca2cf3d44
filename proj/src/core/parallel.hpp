#pragma once

#include <functional>

namespace panogeo {

// Global worker-count override. 0 restores the default, which is the
// PANOGEO_THREADS environment variable when set, else hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs fn(row) for every row in [0, rows). Rows are split into contiguous
// blocks, one per worker. Safe only for bodies whose writes are disjoint per
// row; results are then identical for any worker count.
void parallel_rows(int rows, const std::function<void(int)>& fn);

}  // namespace panogeo
