#pragma once

// Entropy, bounds and invariant checkers over simulated stacks and traces.
//
// Stacks are passed as top-down snapshots: s[0] is r_1 (the top run). Indices
// reported by the checkers are 1-based top-down positions.

#include "mergelab/policy.hpp"
#include "mergelab/runs.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mergelab {

struct Constants {
    double phi;         // (1 + sqrt 5) / 2
    double alpha_inf;   // 2 + sqrt 7, domination constant of the unpatched policy
    double delta;       // (5 / (2 + sqrt 7))^(1/5), loose unpatched growth rate
    double Delta;       // (1 + sqrt 7)^(1/5), tight unpatched growth rate
    double kappa;       // 3/2, leading constant of the patched worst case
    double gamma_start; // 2 * sum_{j>=1} j 2^(-j/2) = 8 + 6 sqrt 2
    double theta;       // alpha_inf / (2 alpha_inf - 1), breakpoint of expansion_f
};

const Constants& constants();

/// Relative tolerance used by every floating-point bound check.
inline constexpr double kRelTol = 1e-9;

/// Shannon entropy (bits) of the distribution r_i / n.
double entropy(const RunProfile& profile);

/// Positions i where r_{i+2} > r_{i+1} + r_i or r_{i+1} > r_i fails.
std::vector<std::size_t> check_python_invariant(std::span<const Length> s);

/// Positions i >= 3 with r_i <= r_{i-1} + r_{i-2}.
std::vector<std::size_t> obstruction_indices(std::span<const Length> s);

/// r_3 < r_4 < ... < r_h and (2 + sqrt 7) r_i >= r_2 + ... + r_{i-1} for i >= 3.
bool check_domination(std::span<const Length> s);

/// r_i + r_{i+1} < r_{i+2} for every i in {3, ..., h-2}.
bool check_interior_invariant(std::span<const Length> s);

/// r_i <= 2^((i+1-j)/2) r_j for all i <= j (holds on patched stable stacks).
bool check_stable_growth(std::span<const Length> s);

/// r_2 < r_4 and r_3 < r_4 when h >= 4.
bool check_r4_dominates(std::span<const Length> s);

/// r_2 + ... + r_{i-1} < phi r_i for every i in {3, ..., h}.
bool check_phi_prefix_sums(std::span<const Length> s);

/// Exact non-negative rational.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Ratio reduced() const;
    friend bool operator<(const Ratio& a, const Ratio& b)
    {
        return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
    }
    friend bool operator==(const Ratio& a, const Ratio& b)
    {
        return static_cast<unsigned __int128>(a.num) * b.den == static_cast<unsigned __int128>(b.num) * a.den;
    }
};

/// max over i >= 2 of (r_1 + ... + r_{i-1}) / r_i; 0 when h < 2.
Ratio stack_expansion_ratio(std::span<const Length> s);

/// Largest stack_expansion_ratio over the stable stacks of the traces (the
/// stack just before each push, and the stack closing the main loop). For the
/// unpatched policy this never exceeds 2 + sqrt 7.
Ratio alpha_estimate(std::span<const Trace> traces);
Ratio alpha_estimate(const Trace& trace);

/// Piecewise-linear bound on sum/top ratios of unpatched stable stacks:
/// (1+a)x on [0,1/2], x + a(1-x) on [1/2,theta], a x on [theta,1], a = 2+sqrt 7.
double expansion_f(double x);

/// pot(r) = 1.5 r log2 r.
double potential(Length r);

// --- segmentation -------------------------------------------------------------

/// One main-loop iteration: the push (#1) plus its maximal run of #2 merges form
/// the starting sequence; the remaining merges up to the next push form the
/// ending sequence. Indices refer to Trace::events.
struct Piece {
    std::size_t push_event = 0;
    Length pushed = 0;
    std::vector<std::size_t> starting;
    std::vector<std::size_t> ending;
};

struct Segmentation {
    std::vector<Piece> pieces;
};

Segmentation segment_trace(const Trace& trace);

struct WordPiece {
    std::vector<EventKind> starting;
    std::vector<EventKind> ending;
};

/// Segments a word over {PUSH, M2..M5}; other symbols are ignored.
std::vector<WordPiece> segment_word(std::span<const EventKind> word);

/// False if the ending sequence contains "#2 #2" or "#X #X #2" (#X in {#3,#4,#5}).
bool ending_grammar_ok(std::span<const EventKind> ending);
bool check_ending_grammar(const Segmentation& seg, const Trace& trace);

/// Every ending sequence of a run of length r costs at most its potential
/// variation plus r.
bool check_ending_potential(const Segmentation& seg, const Trace& trace);

/// Every starting sequence of a run of length r costs at most gamma_start * r.
bool check_starting_cost(const Segmentation& seg, const Trace& trace);

// --- bounds -----------------------------------------------------------------------

struct HeightBounds {
    double bound = 0;             // the tightest available upper bound
    std::optional<double> loose;  // unpatched only: 7 + log_delta(n)
};

/// Unpatched: 3 + log_Delta(n) (loose: 7 + log_delta(n)). Patched: the smallest
/// h whose Fibonacci tower sum exceeds n; stable stacks of height h need at
/// least fib_tower_sum(h) elements and a push adds one level.
HeightBounds height_bound(std::uint64_t n, PolicyVariant variant);

/// Height bound once the starting sequence of a run of length r is over:
/// 4 + 2 log2(n / r).
double starting_height_bound(std::uint64_t n, Length r);

// --- auditing ---------------------------------------------------------------------

struct CheckResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::string first_violation;

    bool passed() const { return violations == 0; }
};

struct AuditOptions {
    /// Additive slack per element in the patched cost envelope 1.5 n H + envelope n.
    double envelope = 20.0;
};

/// Consumes the events of one simulation in order and evaluates every
/// applicable check. `profile` supplies the expected pushes and n.
class TraceMonitor {
public:
    TraceMonitor(PolicyVariant variant, RunProfile profile, std::optional<std::size_t> capacity = std::nullopt,
                 AuditOptions options = {});

    void feed(EventKind kind, Length cost, std::span<const Length> snapshot);
    /// Closes the run and returns the checks that apply to the variant.
    std::vector<CheckResult> finish();

    Ratio alpha() const { return alpha_; }
    std::size_t max_height() const { return max_height_; }
    Length main_loop_cost() const { return main_cost_; }
    Length force_cost() const { return force_cost_; }

private:
    enum Check : std::size_t {
        Replay,
        Mass,
        FinalHeight,
        HeightBound,
        // patched
        StableInvariant,
        StableGrowth,
        InteriorInvariant,
        R4Dominates,
        PhiPrefixSums,
        EndingTopRatio,
        Merge2Ratio,
        EndingGrammar,
        StartingCost,
        EndingPotential,
        StartingHeight,
        CostEnvelope,
        // unpatched
        Domination,
        EndingTopBound,
        AlphaBound,
        NoMerge5,
        CheckCount
    };

    void tally(Check c, bool ok, std::span<const Length> s);
    void on_stable(std::span<const Length> s);
    void on_main_snapshot(std::span<const Length> s);
    void end_starting(std::span<const Length> s);
    void close_piece();

    PolicyVariant variant_;
    RunProfile profile_;
    std::optional<std::size_t> capacity_;
    AuditOptions options_;
    std::vector<CheckResult> results_;

    std::vector<Length> prev_;
    std::size_t event_index_ = 0;
    std::size_t pushes_ = 0;
    Length pushed_total_ = 0;
    bool in_force_ = false;
    bool saw_event_ = false;

    // current piece
    bool have_piece_ = false;
    bool in_starting_ = false;
    Length piece_run_ = 0;
    Length starting_cost_ = 0;
    Length ending_cost_ = 0;
    double ending_pot_ = 0;
    std::vector<EventKind> ending_word_;

    Ratio alpha_;
    std::size_t max_height_ = 0;
    Length main_cost_ = 0;
    Length force_cost_ = 0;
};

/// Replays and audits a recorded trace.
std::vector<CheckResult> audit_trace(const Trace& trace, const AuditOptions& options = {});

/// Simulates and audits without storing the trace.
std::vector<CheckResult> audit_profile(const RunProfile& profile, PolicyVariant variant,
                                       const AuditOptions& options = {},
                                       std::optional<std::size_t> capacity = std::nullopt);

/// Audits many profiles (in parallel when threads != 1) and sums the results
/// per check. Deterministic regardless of thread count.
struct CorpusAudit {
    std::vector<CheckResult> checks;
    Ratio alpha;
    std::size_t profiles = 0;
};

CorpusAudit audit_corpus(std::span<const RunProfile> profiles, PolicyVariant variant,
                         const AuditOptions& options = {}, unsigned threads = 0);

bool all_passed(std::span<const CheckResult> checks);

// --- reports ------------------------------------------------------------------------

struct BoundCheck {
    double value = 0;
    double limit = 0;
    bool satisfied = true;
};

struct CostReport {
    PolicyVariant variant = PolicyVariant::Patched;
    std::uint64_t n = 0;
    std::uint64_t rho = 0;
    double entropy = 0;
    Length main_loop_cost = 0;
    Length force_cost = 0;
    Length total_cost = 0;
    std::optional<std::uint64_t> comparisons; // only when an actual array was sorted
    std::size_t max_height = 0;
    double reference_lower = 0;               // max(0, nH - 3n), class-level reference only
    std::optional<double> cost_per_nh;        // total / (n H), absent when H = 0
    std::optional<double> cost_per_nlogrho;   // total / (n log2 rho), absent when rho = 1
    Ratio alpha;
    std::map<std::string, BoundCheck> bound_checks;

    bool all_satisfied() const;
};

CostReport report(const RunProfile& profile, PolicyVariant variant, const AuditOptions& options = {});

} // namespace mergelab
