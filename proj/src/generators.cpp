#include "mergelab/generators.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace mergelab {

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("Rng::below: zero bound");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold)
            return x % bound;
    }
}

// --- published vectors ----------------------------------------------------------

namespace {

constexpr std::array<Length, 9> kFig2 = {24, 18, 50, 28, 20, 6, 4, 8, 1};
constexpr std::array<Length, 9> kFig5 = {109, 83, 25, 16, 8, 7, 26, 2, 27};

// Drives the unpatched policy to the stable stack
// (5,6,12,18,31,36,68,95,99,195,276,356,360), top first.
constexpr std::array<Length, 97> kProp81 = {
    360, 356, 3,  2,  4, 6, 10, 2,  1, 22, 4, 2, 1, 5,  1, 8, 4, 2,  1, 73, 4,  2, 5, 7, 2,
    16,  3,   2,  4,  6, 21, 4, 2,  22, 4, 2, 1, 5, 8,  3, 2, 79, 3, 2, 4,  6,  2, 10, 6, 3,
    2,   33,  4,  2,  5, 7,  1,  13, 4, 2, 1, 5, 1, 80, 4, 2, 5,  7, 1, 95, 3, 2, 4, 6, 10,
    20,  4,   2,  5,  7, 3,  2,  26, 6, 3, 1, 31, 3, 2, 4, 6, 2, 1, 12, 4, 2, 5};

} // namespace

std::optional<PaperVectorId> parse_paper_vector(std::string_view s)
{
    if (s == "fig2" || s == "FIG2")
        return PaperVectorId::Fig2;
    if (s == "fig5" || s == "FIG5")
        return PaperVectorId::Fig5;
    if (s == "prop81" || s == "PROP81")
        return PaperVectorId::Prop81;
    return std::nullopt;
}

std::string_view to_string(PaperVectorId id)
{
    switch (id) {
    case PaperVectorId::Fig2: return "fig2";
    case PaperVectorId::Fig5: return "fig5";
    case PaperVectorId::Prop81: return "prop81";
    }
    return "?";
}

RunProfile paper_vector(PaperVectorId id)
{
    switch (id) {
    case PaperVectorId::Fig2: return RunProfile({kFig2.begin(), kFig2.end()});
    case PaperVectorId::Fig5: return RunProfile({kFig5.begin(), kFig5.end()});
    case PaperVectorId::Prop81: return RunProfile({kProp81.begin(), kProp81.end()});
    }
    throw std::invalid_argument("unknown published vector");
}

// --- R(n) -------------------------------------------------------------------

namespace {

void append_rtim(std::int64_t n, std::vector<Length>& out)
{
    if (n <= 6) {
        out.push_back(static_cast<Length>(n));
        return;
    }
    const std::int64_t k = n / 2;
    append_rtim(k, out);
    append_rtim(n % 2 == 0 ? k - 2 : k - 1, out);
    out.push_back(2);
}

} // namespace

RunProfile rtim(std::int64_t n)
{
    if (n <= 0)
        throw std::invalid_argument("rtim: n must be positive");
    std::vector<Length> lengths;
    append_rtim(n, lengths);
    return RunProfile(std::move(lengths));
}

std::vector<std::uint64_t> rtim_cost_table(std::int64_t n_max)
{
    if (n_max <= 0)
        throw std::invalid_argument("rtim_cost: n must be positive");
    std::vector<std::uint64_t> c(static_cast<std::size_t>(n_max) + 1, 0);
    for (std::int64_t n = 7; n <= n_max; ++n) {
        const auto k = static_cast<std::size_t>(n / 2);
        const std::uint64_t k3 = 3 * static_cast<std::uint64_t>(k);
        c[static_cast<std::size_t>(n)] = n % 2 == 0 ? c[k] + c[k - 2] + k3 : c[k] + c[k - 1] + k3 + 2;
    }
    return c;
}

std::uint64_t rtim_cost(std::int64_t n)
{
    if (n <= 0)
        throw std::invalid_argument("rtim_cost: n must be positive");
    return rtim_cost_table(n)[static_cast<std::size_t>(n)];
}

// --- Fibonacci towers ------------------------------------------------------------

namespace {

std::vector<Length> tower_levels(std::size_t h)
{
    std::vector<Length> s;
    for (std::size_t i = 0; i < h; ++i) {
        if (i == 0)
            s.push_back(1);
        else if (i == 1)
            s.push_back(2);
        else
            s.push_back(s[i - 1] + s[i - 2] + 1);
    }
    return s;
}

} // namespace

RunProfile fib_tower(std::size_t h)
{
    if (h == 0)
        throw std::invalid_argument("fib_tower: height must be positive");
    auto s = tower_levels(h);
    std::reverse(s.begin(), s.end());
    return RunProfile(std::move(s));
}

Length fib_tower_sum(std::size_t h)
{
    const auto s = tower_levels(h);
    return std::accumulate(s.begin(), s.end(), Length{0});
}

// --- random profiles ------------------------------------------------------------

RunProfile random_profile(std::uint64_t n, std::uint64_t rho, std::uint64_t seed)
{
    if (rho == 0 || rho > n || n < 2 * rho - 1)
        throw std::invalid_argument("random_profile: infeasible (need 1 <= rho and n >= 2*rho - 1)");
    const std::uint64_t excess = n - (2 * rho - 1);
    const std::uint64_t slots = excess + rho - 1;
    const std::uint64_t cuts = rho - 1;

    // Floyd's sampling of `cuts` distinct positions in [0, slots).
    Rng rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(cuts * 2);
    for (std::uint64_t j = slots - cuts; j < slots; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second)
            chosen.insert(j);
    }
    std::vector<std::uint64_t> pos(chosen.begin(), chosen.end());
    std::sort(pos.begin(), pos.end());

    std::vector<Length> lengths;
    lengths.reserve(rho);
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < cuts; ++i) {
        const std::uint64_t part = pos[i] - prev;
        lengths.push_back(part + 2);
        prev = pos[i] + 1;
    }
    lengths.push_back(slots - prev + 1);
    return RunProfile(std::move(lengths));
}

// --- realization ------------------------------------------------------------------

std::vector<std::int64_t> realize_array(const RunProfile& profile, std::uint64_t seed)
{
    if (!profile.realizable())
        throw std::invalid_argument("realize_array: profile is not realizable (a run of length 1 before the end)");
    const std::size_t rho = profile.size();
    const auto n = static_cast<std::int64_t>(profile.total());

    std::vector<std::vector<std::int64_t>> parts(rho);
    if (seed == 0) {
        std::int64_t top = n;
        for (std::size_t i = 0; i < rho; ++i) {
            const auto len = static_cast<std::int64_t>(profile[i]);
            for (std::int64_t v = top - len + 1; v <= top; ++v)
                parts[i].push_back(v);
            top -= len;
        }
    } else {
        std::vector<std::int64_t> values(static_cast<std::size_t>(n));
        std::iota(values.begin(), values.end(), 1);
        Rng rng(seed);
        for (std::size_t i = values.size(); i > 1; --i)
            std::swap(values[i - 1], values[rng.below(i)]);
        std::size_t at = 0;
        for (std::size_t i = 0; i < rho; ++i) {
            parts[i].assign(values.begin() + static_cast<std::ptrdiff_t>(at),
                            values.begin() + static_cast<std::ptrdiff_t>(at + profile[i]));
            std::sort(parts[i].begin(), parts[i].end());
            at += profile[i];
        }
        // Make the partition "nice": every run ends above the next run's start.
        for (std::size_t i = 0; i + 1 < rho; ++i) {
            auto& left = parts[i];
            auto& right = parts[i + 1];
            if (left.back() < right.front()) {
                std::swap(left.back(), right.front());
                std::sort(left.begin(), left.end());
                std::sort(right.begin(), right.end());
            }
        }
    }

    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& p : parts)
        out.insert(out.end(), p.begin(), p.end());
    return out;
}

// --- stack height search ------------------------------------------------------------

std::size_t reached_height(const RunProfile& profile, PolicyVariant variant)
{
    return simulate_summary(profile, variant).max_height;
}

namespace {

struct Best {
    std::vector<Length> profile;
    std::size_t height = 0;

    void offer(const std::vector<Length>& p, std::size_t h)
    {
        if (h > height || (h == height && !p.empty() && (profile.empty() || p < profile))) {
            height = h;
            profile = p;
        }
    }
};

void collapse(StackState& s, PolicyVariant variant)
{
    for (MergeCase c = select_case(s, variant); c != MergeCase::None; c = select_case(s, variant))
        apply_case(s, c, variant);
}

// Depth-first enumeration in lexicographic order. Every nonempty prefix is a
// realizable profile; a run of length 1 may only close the sequence.
void dfs(const StackState& stack, std::uint64_t sum, std::size_t peak, std::vector<Length>& prefix,
         std::uint64_t n_max, std::uint64_t len_max, PolicyVariant variant, Best& best)
{
    if (sum + 1 <= n_max) {
        prefix.push_back(1);
        best.offer(prefix, std::max(peak, stack.height() + 1));
        prefix.pop_back();
    }
    for (std::uint64_t len = 2; len <= len_max && sum + len <= n_max; ++len) {
        StackState next = stack;
        next.push(len);
        const std::size_t p = std::max(peak, next.height());
        collapse(next, variant);
        prefix.push_back(len);
        best.offer(prefix, p);
        dfs(next, sum + len, p, prefix, n_max, len_max, variant, best);
        prefix.pop_back();
    }
}

HeightSearchResult exhaustive(std::uint64_t n_max, std::uint64_t len_max, PolicyVariant variant, unsigned threads)
{
    // One task per first run length; the reduction is order independent.
    std::vector<std::uint64_t> firsts;
    for (std::uint64_t len = 1; len <= std::min(len_max, n_max); ++len)
        firsts.push_back(len);

    auto task = [&](std::uint64_t first) {
        Best best;
        std::vector<Length> prefix{first};
        StackState s;
        s.push(first);
        best.offer(prefix, 1);
        if (first >= 2)
            dfs(s, first, 1, prefix, n_max, len_max, variant, best);
        return best;
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<Best> results(firsts.size());
    if (threads <= 1 || firsts.size() <= 1) {
        for (std::size_t i = 0; i < firsts.size(); ++i)
            results[i] = task(firsts[i]);
    } else {
        std::vector<std::future<Best>> futures;
        for (std::size_t i = 0; i < firsts.size(); ++i)
            futures.push_back(std::async(std::launch::async, task, firsts[i]));
        for (std::size_t i = 0; i < firsts.size(); ++i)
            results[i] = futures[i].get();
    }
    Best best;
    for (const auto& b : results)
        best.offer(b.profile, b.height);
    return {RunProfile(best.profile), best.height, true};
}

struct BeamState {
    StackState stack;
    std::vector<Length> profile;
    std::uint64_t sum = 0;
    std::size_t peak = 0;
    bool closed = false; // ended with a run of length 1
};

bool beam_better(const BeamState& a, const BeamState& b)
{
    if (a.peak != b.peak)
        return a.peak > b.peak;
    if (a.stack.height() != b.stack.height())
        return a.stack.height() > b.stack.height();
    if (a.sum != b.sum)
        return a.sum < b.sum;
    return a.profile < b.profile;
}

std::vector<std::uint64_t> beam_candidates(const BeamState& st, std::uint64_t n_max, std::uint64_t len_max)
{
    const std::uint64_t room = std::min(len_max, n_max - st.sum);
    std::set<std::uint64_t> c;
    for (std::uint64_t len = 1; len <= std::min<std::uint64_t>(room, 12); ++len)
        c.insert(len);
    for (std::uint64_t len = 16; len <= room; len *= 2)
        c.insert(len);
    if (st.profile.empty()) {
        for (std::uint64_t d = 0; d < 8 && d < room; ++d)
            c.insert(room - d);
        for (std::uint64_t len = room; len > 1; len = len * 3 / 4)
            c.insert(len);
    }
    const auto& s = st.stack;
    for (std::size_t i = 1; i <= std::min<std::size_t>(s.height(), 4); ++i) {
        for (std::uint64_t base : {s.r(i), i + 1 <= s.height() ? s.r(i + 1) - std::min(s.r(i + 1), s.r(i)) : 0}) {
            for (std::uint64_t d : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{0}}) {
                if (base > d && base - d >= 1 && base - d <= room)
                    c.insert(base - d);
            }
        }
    }
    c.erase(0);
    return {c.begin(), c.end()};
}

HeightSearchResult beam(std::uint64_t n_max, std::uint64_t len_max, PolicyVariant variant, std::size_t width)
{
    std::vector<BeamState> frontier(1);
    Best best;
    while (!frontier.empty()) {
        std::vector<BeamState> next;
        for (const auto& st : frontier) {
            if (st.closed)
                continue;
            for (std::uint64_t len : beam_candidates(st, n_max, len_max)) {
                if (len == 0 || st.sum + len > n_max)
                    continue;
                BeamState child = st;
                child.stack.push(len);
                child.peak = std::max(child.peak, child.stack.height());
                collapse(child.stack, variant);
                child.profile.push_back(len);
                child.sum += len;
                child.closed = len == 1;
                best.offer(child.profile, child.peak);
                next.push_back(std::move(child));
            }
        }
        std::sort(next.begin(), next.end(), beam_better);
        if (next.size() > width)
            next.resize(width);
        frontier = std::move(next);
    }
    return {RunProfile(best.profile), best.height, false};
}

} // namespace

HeightSearchResult max_height_search(std::uint64_t n_max, std::uint64_t len_max, PolicyVariant variant,
                                     std::size_t beam_width, unsigned threads)
{
    if (n_max == 0)
        throw std::invalid_argument("max_height_search: n_max must be positive");
    if (len_max == 0)
        len_max = n_max;
    if (n_max <= kExhaustiveSearchLimit)
        return exhaustive(n_max, len_max, variant, threads);
    return beam(n_max, len_max, variant, std::max<std::size_t>(1, beam_width));
}

} // namespace mergelab
