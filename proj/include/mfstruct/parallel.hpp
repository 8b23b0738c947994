#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mfstruct {

// Run fn(lo, hi) over consecutive chunks of [begin, end). Chunk boundaries do
// not depend on the worker count, so any writer that touches only its own
// chunk produces identical results for any number of workers.
inline void parallel_chunks(uint64_t begin, uint64_t end, uint64_t chunk, int workers,
                            const std::function<void(uint64_t, uint64_t)>& fn) {
    if (begin >= end) return;
    const uint64_t nchunks = (end - begin + chunk - 1) / chunk;
    if (workers <= 1 || nchunks <= 1) {
        for (uint64_t c = 0; c < nchunks; ++c) {
            const uint64_t lo = begin + c * chunk;
            fn(lo, std::min(end, lo + chunk));
        }
        return;
    }
    std::atomic<uint64_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (;;) {
            const uint64_t c = next.fetch_add(1);
            if (c >= nchunks || failed.load()) return;
            const uint64_t lo = begin + c * chunk;
            try {
                fn(lo, std::min(end, lo + chunk));
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(workers, static_cast<int>(nchunks));
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace mfstruct
