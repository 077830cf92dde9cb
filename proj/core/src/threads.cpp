#include "dynoct/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace dynoct {

int thread_count() {
    int n = 0;
    if (const char* env = std::getenv("DYNOCT_THREADS")) {
        try {
            n = std::stoi(env);
        } catch (...) {
            n = 0;
        }
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace dynoct
