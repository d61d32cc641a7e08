#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ballmapper {

// Worker cap for the few loops that split over point ranges.
// Results never depend on the thread count.
struct Exec {
  unsigned threads = 1;
};

namespace detail {

inline std::size_t chunk_count(std::size_t n, Exec exec, std::size_t grain = 1) {
  const std::size_t by_size = (n + grain - 1) / std::max<std::size_t>(grain, 1);
  return std::max<std::size_t>(
      1, std::min<std::size_t>(std::max(exec.threads, 1u), by_size));
}

// Calls fn(begin, end, chunk) over contiguous chunks of [0, n), each at least
// `grain` long. The chunk index lets callers keep per-chunk buffers that are
// merged in chunk order; errors are rethrown from the lowest failing chunk.
template <typename Fn>
void parallel_chunks(std::size_t n, Exec exec, Fn&& fn, std::size_t grain = 1) {
  const std::size_t chunks = chunk_count(n, exec, grain);
  if (chunks == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(chunks);
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    workers.emplace_back([&, begin, end, c] {
      try {
        fn(begin, end, c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail
}  // namespace ballmapper
