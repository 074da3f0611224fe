#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rvcv/rng.hpp"

namespace rvcv {

/// Hardware parallelism, used as the default worker count (the role of K0).
inline unsigned default_worker_count() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1u : n;
}

/// Runs `job(k)` for k = 0..job_count-1 across `worker_count` threads and
/// returns the results in replicate order.
///
/// Jobs are distributed round-robin by replicate index and must draw all of
/// their randomness from a seed derived from their own indices (derive_seed),
/// so the output is bitwise identical for every worker count. A failing job
/// is retried once; a second failure aborts the whole batch by rethrowing on
/// the calling thread after all workers have joined.
template <typename T, typename Job>
std::vector<T> run_parallel(std::size_t job_count, unsigned worker_count, Job&& job) {
    if (worker_count == 0) throw std::invalid_argument("run_parallel: need at least 1 worker");
    std::vector<T> results(job_count);
    if (job_count == 0) return results;

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(worker_count, job_count));

    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&](unsigned w) {
        for (std::size_t k = w; k < job_count; k += workers) {
            try {
                try {
                    results[k] = job(k);
                } catch (...) {
                    results[k] = job(k);  // one retry
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers - 1);
        for (unsigned w = 1; w < workers; ++w) threads.emplace_back(work, w);
        work(0);
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace rvcv
