#pragma once

// A stable natural mergesort driven by the merge-collapse policy. No galloping
// and no minrun extension: run boundaries on the run stack are exactly those of
// the run-length simulator, which makes the measured work comparable with the
// r + r' cost model.

#include "mergelab/policy.hpp"
#include "mergelab/runs.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mergelab {

struct SortMetrics {
    std::uint64_t comparisons = 0;       // all key comparisons
    std::uint64_t run_comparisons = 0;   // spent detecting runs (always n - 1)
    std::uint64_t merge_comparisons = 0; // spent inside merges
    Length main_loop_cost = 0;
    Length force_cost = 0;
    std::size_t max_height = 0;
    std::uint64_t moved = 0;
    std::size_t runs = 0;

    Length merge_cost() const { return main_loop_cost + force_cost; }
};

/// Stable merge of the sorted ranges a[lo, mid) and a[mid, hi). The smaller side
/// is copied to `buffer`. Returns the number of key comparisons, at most
/// hi - lo - 1. Equal keys keep their left-side-first order.
template <class T, class Compare = std::less<>>
std::uint64_t merge_adjacent(std::span<T> a, std::size_t lo, std::size_t mid, std::size_t hi, Compare comp,
                             std::vector<T>& buffer, std::uint64_t* moved = nullptr)
{
    if (lo > mid || mid > hi || hi > a.size())
        throw std::out_of_range("merge_adjacent: malformed bounds");
    std::uint64_t cmp = 0;
    std::uint64_t mv = 0;
    if (lo == mid || mid == hi)
        return 0;

    if (mid - lo <= hi - mid) {
        buffer.assign(std::make_move_iterator(a.begin() + static_cast<std::ptrdiff_t>(lo)),
                      std::make_move_iterator(a.begin() + static_cast<std::ptrdiff_t>(mid)));
        mv += buffer.size();
        std::size_t i = 0, j = mid, k = lo;
        while (i < buffer.size() && j < hi) {
            ++cmp;
            if (comp(a[j], buffer[i]))
                a[k++] = std::move(a[j++]);
            else
                a[k++] = std::move(buffer[i++]);
            ++mv;
        }
        while (i < buffer.size()) {
            a[k++] = std::move(buffer[i++]);
            ++mv;
        }
    } else {
        buffer.assign(std::make_move_iterator(a.begin() + static_cast<std::ptrdiff_t>(mid)),
                      std::make_move_iterator(a.begin() + static_cast<std::ptrdiff_t>(hi)));
        mv += buffer.size();
        std::size_t i = mid, j = buffer.size(), k = hi;
        while (i > lo && j > 0) {
            ++cmp;
            if (comp(buffer[j - 1], a[i - 1]))
                a[--k] = std::move(a[--i]);
            else
                a[--k] = std::move(buffer[--j]);
            ++mv;
        }
        while (j > 0) {
            a[--k] = std::move(buffer[--j]);
            ++mv;
        }
    }
    if (moved)
        *moved += mv;
    return cmp;
}

template <class T, class Compare = std::less<>>
std::uint64_t merge_adjacent(std::span<T> a, std::size_t lo, std::size_t mid, std::size_t hi, Compare comp = {})
{
    std::vector<T> buffer;
    return merge_adjacent(a, lo, mid, hi, comp, buffer);
}

/// Sorts `a` in place. When `events` is given, every push, merge and forced
/// merge is recorded with the run-length stack it leaves behind, in the same
/// format as simulate().
template <class T, class Compare = std::less<>>
SortMetrics timsort_lite(std::span<T> a, PolicyVariant variant, Compare comp = {},
                         std::vector<TraceEvent>* events = nullptr)
{
    SortMetrics m;
    if (a.empty())
        return m;

    struct Slice {
        std::size_t base;
        std::size_t len;
    };
    std::vector<Slice> stack; // bottom to top
    std::vector<T> buffer;

    auto record = [&](EventKind kind, Length cost) {
        m.max_height = std::max(m.max_height, stack.size());
        if (!events)
            return;
        std::vector<Length> snap;
        snap.reserve(stack.size());
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            snap.push_back(it->len);
        events->push_back({kind, cost, std::move(snap)});
    };
    // Merges R_i and R_{i+1}, counted from the top (1-based).
    auto merge_at = [&](std::size_t i) -> Length {
        const std::size_t upper = stack.size() - i;
        Slice& lower = stack[upper - 1];
        const Slice right = stack[upper];
        m.merge_comparisons +=
            merge_adjacent(a, lower.base, right.base, right.base + right.len, comp, buffer, &m.moved);
        lower.len += right.len;
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(upper));
        return lower.len;
    };
    auto r = [&](std::size_t i) -> Length { return i <= stack.size() ? stack[stack.size() - i].len : 0; };

    const std::span<const T> view(a.data(), a.size());
    for (std::size_t lo = 0; lo < a.size();) {
        const Run run = scan_run(view, lo, comp, &m.run_comparisons);
        if (run.direction == Direction::Decreasing) {
            const Run single[1] = {run};
            normalize(a, std::span<const Run>(single));
            m.moved += run.length;
        }
        ++m.runs;
        stack.push_back({run.offset, run.length});
        record(EventKind::Push, 0);
        for (;;) {
            const MergeCase c = select_case(stack.size(), r(1), r(2), r(3), r(4), variant);
            if (c == MergeCase::None)
                break;
            const Length cost = merge_at(c == MergeCase::Merge2 ? 2 : 1);
            m.main_loop_cost += cost;
            record(event_kind(c), cost);
        }
        lo = run.end();
    }
    while (stack.size() > 1) {
        const Length cost = merge_at(1);
        m.force_cost += cost;
        record(EventKind::Force, cost);
    }
    m.comparisons = m.run_comparisons + m.merge_comparisons;
    return m;
}

template <class T, class Compare = std::less<>>
SortMetrics timsort_lite(std::vector<T>& a, PolicyVariant variant, Compare comp = {},
                         std::vector<TraceEvent>* events = nullptr)
{
    return timsort_lite(std::span<T>(a), variant, comp, events);
}

} // namespace mergelab
