#include "odikit/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace odikit {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (threads > n) threads = n;
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

int default_thread_count() {
    if (const char* env = std::getenv("ODIKIT_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
        }
    }
    return 1;
}

}  // namespace odikit
