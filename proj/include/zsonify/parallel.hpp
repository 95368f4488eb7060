#pragma once

#include <cstddef>
#include <deque>
#include <future>
#include <thread>
#include <type_traits>
#include <utility>

namespace zsonify {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Renders count items in parallel and merges them strictly in index order,
/// so the merged result is bit-identical for any thread count. render(i)
/// must be a pure function of i; merge runs on the calling thread only.
template <typename Render, typename Merge>
void ordered_render_merge(std::size_t count, int threads, Render&& render, Merge&& merge) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) merge(i, render(i));
        return;
    }

    using Result = std::invoke_result_t<Render&, std::size_t>;
    const std::size_t window = static_cast<std::size_t>(threads) * 2;
    std::deque<std::future<Result>> pending;
    std::size_t next = 0;
    for (std::size_t done = 0; done < count; ++done) {
        while (next < count && pending.size() < window) {
            pending.push_back(std::async(std::launch::async,
                                         [&render, i = next] { return render(i); }));
            ++next;
        }
        merge(done, pending.front().get());
        pending.pop_front();
    }
}

} // namespace zsonify
