#include "rhpw/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rhpw {

namespace {
std::atomic<int> g_threads{0};
// Calls made from inside a worker run serially.
thread_local bool t_in_worker = false;
}

void set_thread_count(int n) { g_threads = std::max(0, n); }

int thread_count()
{
    int n = g_threads.load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& f)
{
    const int workers = t_in_worker ? 1 : std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            t_in_worker = true;
            try {
                for (int i = next++; i < n; i = next++) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rhpw
