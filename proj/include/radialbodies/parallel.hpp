#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace radialbodies {

/// Worker cap: hardware concurrency, overridable by RADIAL_BODIES_THREADS.
inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("RADIAL_BODIES_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < 1024) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

/// Index-parallel loop with deterministic work assignment by index; results
/// must be written to per-index slots by the callee.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::min<std::size_t>(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace radialbodies
