#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace tgeom {

/// Worker count from TGEOM_WORKERS, defaulting to 1.
unsigned default_workers();

/// Splits [0, n) into contiguous chunks, runs `body(begin, end)` for each on
/// its own thread and returns the chunk results in index order, so the merged
/// output never depends on the worker count.
template <class Body>
auto parallel_chunks(std::size_t n, unsigned workers, Body body) {
    using Result = decltype(body(std::size_t{0}, std::size_t{0}));
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
    std::vector<Result> results(chunks);
    if (chunks == 1) {
        results[0] = body(0, n);
        return results;
    }
    std::vector<std::jthread> threads;
    threads.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        threads.emplace_back([&results, &body, c, begin, end] { results[c] = body(begin, end); });
    }
    threads.clear();
    return results;
}

}  // namespace tgeom
