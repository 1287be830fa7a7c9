#pragma once

// Run decomposition: the greedy left-to-right split of an array into maximal
// monotonic runs, with the same conventions as reference TimSort.
//
//  * The first two elements of a run fix its direction.
//  * Nondecreasing runs accept equal neighbours; decreasing runs must be
//    strictly decreasing, so reversing them in place keeps the sort stable.
//  * A single trailing element forms a nondecreasing run of length 1.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mergelab {

using Length = std::uint64_t;

enum class Direction { Nondecreasing, Decreasing };

struct Run {
    std::size_t offset = 0;
    std::size_t length = 0;
    Direction direction = Direction::Nondecreasing;

    std::size_t end() const { return offset + length; }
    friend bool operator==(const Run&, const Run&) = default;
};

/// Sequence of positive run lengths in push order (left to right in the array).
class RunProfile {
public:
    RunProfile() = default;
    explicit RunProfile(std::vector<Length> lengths);

    const std::vector<Length>& lengths() const { return lengths_; }
    std::size_t size() const { return lengths_.size(); }
    Length total() const { return total_; }

    /// True iff every run but the last has length >= 2, i.e. some array
    /// decomposes into exactly these runs.
    bool realizable() const { return realizable_; }

    Length operator[](std::size_t i) const { return lengths_[i]; }
    auto begin() const { return lengths_.begin(); }
    auto end() const { return lengths_.end(); }

    friend bool operator==(const RunProfile& a, const RunProfile& b) { return a.lengths_ == b.lengths_; }

private:
    std::vector<Length> lengths_;
    Length total_ = 0;
    bool realizable_ = false;
};

/// Reads the run starting at `lo` and returns its length and direction.
/// `comparisons`, when given, is incremented once per key comparison.
template <class T, class Compare = std::less<>>
Run scan_run(std::span<const T> a, std::size_t lo, Compare comp = {}, std::uint64_t* comparisons = nullptr)
{
    const std::size_t n = a.size();
    auto less = [&](const T& x, const T& y) {
        if (comparisons)
            ++*comparisons;
        return comp(x, y);
    };
    if (lo + 1 >= n)
        return Run{lo, n - lo, Direction::Nondecreasing};

    std::size_t hi = lo + 1;
    if (less(a[hi], a[lo])) {
        ++hi;
        while (hi < n && less(a[hi], a[hi - 1]))
            ++hi;
        return Run{lo, hi - lo, Direction::Decreasing};
    }
    ++hi;
    while (hi < n && !less(a[hi], a[hi - 1]))
        ++hi;
    return Run{lo, hi - lo, Direction::Nondecreasing};
}

template <class T, class Compare = std::less<>>
std::vector<Run> decompose(std::span<const T> a, Compare comp = {})
{
    if (a.empty())
        throw std::invalid_argument("empty input");
    std::vector<Run> runs;
    for (std::size_t lo = 0; lo < a.size();) {
        runs.push_back(scan_run(a, lo, comp));
        lo = runs.back().end();
    }
    return runs;
}

template <class T, class Compare = std::less<>>
std::vector<Run> decompose(const std::vector<T>& a, Compare comp = {})
{
    return decompose(std::span<const T>(a), comp);
}

/// Reverses every decreasing run in place; afterwards all runs are nondecreasing.
template <class T>
void normalize(std::span<T> a, std::span<const Run> runs)
{
    for (const Run& run : runs) {
        if (run.direction == Direction::Decreasing)
            std::reverse(a.begin() + static_cast<std::ptrdiff_t>(run.offset),
                         a.begin() + static_cast<std::ptrdiff_t>(run.end()));
    }
}

template <class T>
void normalize(std::vector<T>& a, const std::vector<Run>& runs)
{
    normalize(std::span<T>(a), std::span<const Run>(runs));
}

RunProfile profile_of(std::span<const Run> runs);

inline RunProfile profile_of(const std::vector<Run>& runs)
{
    return profile_of(std::span<const Run>(runs));
}

} // namespace mergelab
