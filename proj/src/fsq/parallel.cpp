#include "fsq/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace fsq {

int worker_count(int override_workers) {
  if (override_workers > 0) return override_workers;
  if (const char* env = std::getenv("FSQLAB_WORKERS")) {
    try {
      int k = std::stoi(env);
      if (k > 0) return k;
    } catch (...) {
      // fall through to hardware default on unparsable values
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {
constexpr std::int64_t kChunk = 1024;  // fixed, never derived from workers
}

void parallel_chunks(std::int64_t count,
                     const std::function<void(std::int64_t, std::int64_t)>& body,
                     int workers) {
  if (count <= 0) return;
  const std::int64_t nchunk = (count + kChunk - 1) / kChunk;
  int nw = worker_count(workers);
  if (nw > nchunk) nw = static_cast<int>(nchunk);
  if (nw <= 1) {
    for (std::int64_t c = 0; c < nchunk; ++c)
      body(c * kChunk, std::min(count, (c + 1) * kChunk));
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto drain = [&]() {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= nchunk) return;
      body(c * kChunk, std::min(count, (c + 1) * kChunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nw - 1);
  for (int t = 1; t < nw; ++t) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

double parallel_sum(std::int64_t count, const std::function<double(std::int64_t)>& term,
                    int workers) {
  if (count <= 0) return 0.0;
  const std::int64_t nchunk = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<size_t>(nchunk), 0.0);
  parallel_chunks(
      count,
      [&](std::int64_t b, std::int64_t e) {
        double s = 0;
        for (std::int64_t i = b; i < e; ++i) s += term(i);
        partial[static_cast<size_t>(b / kChunk)] = s;
      },
      workers);
  double total = 0;
  for (double s : partial) total += s;  // fixed order: chunk 0, 1, ...
  return total;
}

}  // namespace fsq
