#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace blest {

// Runs f(worker_id) on `workers` threads (worker 0 on the calling thread) and joins
// them all: a fork/join barrier. workers == 1 runs inline with no thread spawn.
// The first exception thrown by any worker is rethrown after the join.
template <typename F>
void run_workers(unsigned workers, F&& f) {
    if (workers <= 1) {
        f(0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    std::mutex mu;
    std::exception_ptr first_error;
    auto guarded = [&](unsigned w) {
        try {
            f(w);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(mu);
            if (!first_error) first_error = std::current_exception();
        }
    };
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(guarded, w);
    guarded(0u);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline unsigned default_workers() {
    if (const char* env = std::getenv("BLEST_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1u;
}

}  // namespace blest
