#pragma once
#include <cstdint>
#include <functional>

namespace fsq {

// Worker count: explicit override > FSQLAB_WORKERS env var > hardware.
// Results never depend on it: work is split into fixed chunks and partial
// results are combined in chunk order, so sums are bit-identical for any
// worker count.
int worker_count(int override_workers = 0);

// Evaluates term(i) for i in [0, count) and returns the sum, accumulated
// per fixed-size chunk and reduced sequentially in chunk order.
double parallel_sum(std::int64_t count, const std::function<double(std::int64_t)>& term,
                    int workers = 0);

// Runs body(begin, end) over fixed chunks; chunks may execute concurrently
// and must not share mutable state.
void parallel_chunks(std::int64_t count,
                     const std::function<void(std::int64_t, std::int64_t)>& body,
                     int workers = 0);

}  // namespace fsq
