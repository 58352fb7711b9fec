#include "parnn/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace parnn {

namespace {
std::atomic<unsigned> g_default_threads{0};
}

unsigned set_default_threads(unsigned threads) {
    return g_default_threads.exchange(threads);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &fn,
                  unsigned threads) {
    if (count == 0) {
        return;
    }
    if (threads == 0) {
        threads = g_default_threads.load();
    }
    if (threads == 0) {
        threads = std::thread::hardware_concurrency();
    }
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    if (threads > count) {
        threads = static_cast<unsigned>(count);
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace parnn
