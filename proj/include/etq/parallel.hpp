#pragma once

// Static-partition parallel loop. Each index is handled by exactly one worker
// and workers write disjoint outputs, so results never depend on the count.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace etq {

inline std::atomic<int>& thread_count_setting() {
    static std::atomic<int> n{[] {
        const char* env = std::getenv("ETQ_THREADS");
        int v = env ? std::atoi(env) : 1;
        return v > 0 ? v : 1;
    }()};
    return n;
}

inline void set_thread_count(int n) { thread_count_setting() = std::max(1, n); }
inline int thread_count() { return thread_count_setting(); }

template <class Fn>
void parallel_for(long begin, long end, Fn&& fn) {
    const long n = end - begin;
    const int workers = static_cast<int>(std::min<long>(thread_count(), std::max<long>(n, 1)));
    if (workers <= 1) {
        for (long i = begin; i < end; ++i) fn(i);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = begin + w; i < end; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace etq
