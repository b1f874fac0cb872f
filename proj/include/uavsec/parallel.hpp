#pragma once

#include <cstddef>
#include <functional>

namespace uavsec {

unsigned hardware_threads();

/// Runs fn(begin, end) over [0, n) split into contiguous chunks.
/// Chunk boundaries depend only on n and chunk_size, never on the thread
/// count, so per-chunk results can be reduced in a fixed order.
void parallel_for_chunks(std::size_t n, std::size_t chunk_size, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace uavsec
