#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace uavnet::detail {

inline int worker_count() {
    if (const char* env = std::getenv("UAVNET_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, total) and
// lets the caller reduce per-chunk results in chunk order afterwards. The
// chunk layout is independent of the worker count, so results do not depend
// on scheduling.
template <typename Fn>
void for_each_chunk(long total, long chunk_size, Fn&& fn, int threads = 0) {
    if (total <= 0) return;
    const long chunks = (total + chunk_size - 1) / chunk_size;
    if (threads <= 0) threads = worker_count();
    threads = static_cast<int>(std::min<long>(threads, chunks));

    if (threads <= 1) {
        for (long ci = 0; ci < chunks; ++ci) {
            const long b = ci * chunk_size;
            fn(ci, b, std::min(total, b + chunk_size));
        }
        return;
    }

    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            const long ci = next.fetch_add(1);
            if (ci >= chunks) break;
            const long b = ci * chunk_size;
            fn(ci, b, std::min(total, b + chunk_size));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace uavnet::detail
