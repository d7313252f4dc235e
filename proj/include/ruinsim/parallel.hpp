#ifndef RUINSIM_PARALLEL_HPP
#define RUINSIM_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ruinsim {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// run block_fn(begin, end) over [0, n) split into contiguous blocks, one per
// worker. Results must be written to disjoint per-index slots; outputs are
// then independent of the split, so worker count never changes the numbers.
inline void parallel_for(size_t n, int workers,
                         const std::function<void(size_t, size_t)>& block_fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || n < 2) {
        block_fn(0, n);
        return;
    }
    size_t nblocks = static_cast<size_t>(workers);
    if (nblocks > n) nblocks = n;
    std::vector<std::thread> pool;
    pool.reserve(nblocks);
    std::exception_ptr error;
    std::mutex err_mtx;
    size_t chunk = n / nblocks, extra = n % nblocks, begin = 0;
    for (size_t b = 0; b < nblocks; ++b) {
        size_t len = chunk + (b < extra ? 1 : 0);
        size_t end = begin + len;
        pool.emplace_back([&, begin, end]() {
            try {
                block_fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!error) error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace ruinsim

#endif
