#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace edgerm {

/// Runs fn(begin, end) over contiguous chunks of [0, count). Chunk i covers a
/// fixed index range, so callers that write per-index slots or reduce with
/// order-independent operations get identical results for any worker count.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count < 2 * std::uint64_t{workers}) {
        fn(std::uint64_t{0}, count);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    std::uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t begin = std::min(count, chunk * w);
        std::uint64_t end = std::min(count, begin + chunk);
        threads.emplace_back([&, w, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace edgerm
