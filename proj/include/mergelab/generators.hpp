#pragma once

// Structured and adversarial run profiles.

#include "mergelab/policy.hpp"
#include "mergelab/runs.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace mergelab {

enum class PaperVectorId { Fig2, Fig5, Prop81 };

std::optional<PaperVectorId> parse_paper_vector(std::string_view s);
std::string_view to_string(PaperVectorId id);

/// The fixed published run sequences:
///  Fig2   (24,18,50,28,20,6,4,8,1), the collapse walkthrough, n = 159
///  Fig5   (109,83,25,16,8,7,26,2,27), two consecutive invariant breaks, n = 303
///  Prop81 97 runs summing to 1557 whose unpatched stack reaches sum/top = 133/40
RunProfile paper_vector(PaperVectorId id);

/// Worst-case family for the patched policy:
///   R(n) = <n>                    for 1 <= n <= 6
///   R(n) = R(k) . R(k-2) . <2>    for n = 2k,   k >= 4
///   R(n) = R(k) . R(k-1) . <2>    for n = 2k+1, k >= 3
RunProfile rtim(std::int64_t n);

/// Main-loop merge cost of R(n), from the recurrence alone (no simulation).
std::uint64_t rtim_cost(std::int64_t n);

/// rtim_cost(1..n_max) in one pass; index 0 is unused.
std::vector<std::uint64_t> rtim_cost_table(std::int64_t n_max);

/// Minimal strictly Fibonacci-like stack of height h, pushed largest first:
/// s1 = 1, s2 = 2, s_i = s_{i-1} + s_{i-2} + 1. No patched merge ever fires.
RunProfile fib_tower(std::size_t h);

/// Sum of fib_tower(h).
Length fib_tower_sum(std::size_t h);

/// rho lengths summing to n with every length but the last >= 2. The excess
/// n - (2 rho - 1) is spread as a uniformly random weak composition (sorted
/// random cut points). Deterministic per seed.
RunProfile random_profile(std::uint64_t n, std::uint64_t rho, std::uint64_t seed);

/// A permutation of 1..n whose run decomposition is exactly `profile`. Seed 0
/// gives the canonical layout (run i takes the i-th highest block of values,
/// so a single run is 1..n); other seeds draw a random nice partition.
std::vector<std::int64_t> realize_array(const RunProfile& profile, std::uint64_t seed = 0);

struct HeightSearchResult {
    RunProfile profile;
    std::size_t height = 0;
    bool exhaustive = false;
};

/// Exhaustive searches stop here; larger budgets use beam search.
inline constexpr std::uint64_t kExhaustiveSearchLimit = 30;
inline constexpr std::size_t kDefaultBeamWidth = 64;

/// Realizable profile with sum <= n_max (and every length <= len_max) that
/// maximises the largest stack height reached under `variant`. Ties go to the
/// lexicographically smallest profile.
HeightSearchResult max_height_search(std::uint64_t n_max, std::uint64_t len_max, PolicyVariant variant,
                                     std::size_t beam_width = kDefaultBeamWidth, unsigned threads = 0);

/// Largest stack height reached while simulating `profile`.
std::size_t reached_height(const RunProfile& profile, PolicyVariant variant);

/// std::mt19937_64 with bounded draws that do not depend on the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace mergelab
