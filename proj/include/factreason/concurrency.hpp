#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <semaphore>
#include <thread>
#include <vector>

namespace factreason {

/// Runs fn(0..n-1) on up to `limit` worker threads. Results must be written by
/// index so the outcome is independent of scheduling. The first exception is
/// rethrown after all workers finish.
template <typename Fn>
void parallel_for_indexed(std::size_t n, int limit, Fn&& fn) {
    if (n == 0) return;
    const int workers = std::max(1, std::min<int>(limit, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// Caps the number of outstanding outbound requests across all pipeline stages.
class RequestBudget {
public:
    explicit RequestBudget(int limit) : sem_(std::max(1, limit)) {}

    class Lease {
    public:
        explicit Lease(std::counting_semaphore<>& sem) : sem_(&sem) { sem_->acquire(); }
        ~Lease() {
            if (sem_) sem_->release();
        }
        Lease(const Lease&) = delete;
        Lease& operator=(const Lease&) = delete;

    private:
        std::counting_semaphore<>* sem_;
    };

    Lease acquire() { return Lease(sem_); }

private:
    std::counting_semaphore<> sem_;
};

}  // namespace factreason
