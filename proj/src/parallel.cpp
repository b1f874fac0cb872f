#include "uavsec/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace uavsec {

unsigned hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

void parallel_for_chunks(std::size_t n, std::size_t chunk_size, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t num_chunks = (n + chunk_size - 1) / chunk_size;
    if (threads == 0) threads = hardware_threads();
    if (threads <= 1 || num_chunks <= 1) {
        for (std::size_t c = 0; c < num_chunks; ++c) {
            const std::size_t begin = c * chunk_size;
            fn(begin, std::min(begin + chunk_size, n));
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= num_chunks) return;
            const std::size_t begin = c * chunk_size;
            fn(begin, std::min(begin + chunk_size, n));
        }
    };

    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(threads, num_chunks)) - 1;
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

} // namespace uavsec
