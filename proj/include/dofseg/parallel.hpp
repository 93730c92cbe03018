#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace dofseg {

/// Worker cap from DOFSEG_THREADS; 0, unset or unparsable means hardware
/// concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Every index is
/// processed exactly once by exactly one worker, so results that depend only
/// on i are identical for any thread count.
template <typename Body>
void parallel_for(int n, Body&& body)
{
    const unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max(n, 0)));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        const int begin = static_cast<int>(static_cast<long long>(n) * t / workers);
        const int end = static_cast<int>(static_cast<long long>(n) * (t + 1) / workers);
        pool.emplace_back([begin, end, &body] {
            for (int i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace dofseg
