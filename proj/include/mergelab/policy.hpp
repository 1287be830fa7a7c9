#pragma once

// The merge-collapse stack machine on run lengths.
//
// Stacks are indexed top-down as in the literature: r(1) is the run on top,
// r(height()) the bottom one. Merge cases follow the translated cascade:
//
//   #2  h >= 3 and r1 >  r3        merge R2 and R3
//   #3  h >= 2 and r1 >= r2        merge R1 and R2
//   #4  h >= 3 and r1 + r2 >= r3   merge R1 and R2
//   #5  h >= 4 and r2 + r3 >= r4   merge R1 and R2   (patched policy only)
//
// The first matching case wins. The unpatched (Java) policy lacks #5.

#include "mergelab/runs.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace mergelab {

enum class PolicyVariant { Patched, Unpatched };

enum class MergeCase { None, Merge2, Merge3, Merge4, Merge5 };

enum class EventKind { Push, Merge2, Merge3, Merge4, Merge5, Force, Overflow };

/// Run-stack size of Java's TimSort for large arrays.
inline constexpr std::size_t kJavaStackCapacity = 49;

std::string_view to_string(PolicyVariant v);
std::string_view to_string(EventKind k);
std::optional<PolicyVariant> parse_variant(std::string_view s);
std::optional<EventKind> parse_event_kind(std::string_view s);

bool is_merge(EventKind k);
EventKind event_kind(MergeCase c);

class StackState {
public:
    StackState() = default;
    explicit StackState(const std::vector<Length>& top_down, std::optional<std::size_t> capacity = std::nullopt);

    std::size_t height() const { return runs_.size(); }
    bool empty() const { return runs_.empty(); }

    /// Length of the i-th run from the top, 1-based.
    Length r(std::size_t i) const { return runs_[runs_.size() - i]; }

    std::vector<Length> top_down() const;
    Length total() const { return total_; }

    std::optional<std::size_t> capacity() const { return capacity_; }
    bool over_capacity() const { return capacity_ && runs_.size() > *capacity_; }

    void push(Length length);

    /// Merges runs R_i and R_{i+1} (1-based from the top); returns the merged length.
    Length merge_at(std::size_t i);

    friend bool operator==(const StackState& a, const StackState& b) { return a.runs_ == b.runs_; }

private:
    std::vector<Length> runs_; // bottom to top
    Length total_ = 0;
    std::optional<std::size_t> capacity_;
};

MergeCase select_case(std::size_t height, Length r1, Length r2, Length r3, Length r4, PolicyVariant variant);
MergeCase select_case(const StackState& stack, PolicyVariant variant);

/// Applies a merge case in place and returns its cost (the merged run's length).
/// Throws std::logic_error("illegal merge") when the case's guard does not hold.
Length apply_case(StackState& stack, MergeCase c, PolicyVariant variant = PolicyVariant::Patched);

struct TraceEvent {
    EventKind kind = EventKind::Push;
    Length cost = 0;
    std::vector<Length> snapshot; // top-down, after the event

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Drives a stack through pushes and collapses, reporting every event to a
/// sink `sink(EventKind, Length cost, const StackState& after)`.
class Simulator {
public:
    explicit Simulator(PolicyVariant variant, std::optional<std::size_t> capacity = std::nullopt)
        : variant_(variant), stack_({}, capacity)
    {
    }

    PolicyVariant variant() const { return variant_; }
    const StackState& stack() const { return stack_; }

    template <class Sink>
    void push(Length length, Sink&& sink)
    {
        if (length == 0)
            throw std::invalid_argument("run lengths must be positive");
        stack_.push(length);
        sink(EventKind::Push, Length{0}, stack_);
        if (stack_.over_capacity())
            sink(EventKind::Overflow, Length{0}, stack_);
        for (;;) {
            const MergeCase c = select_case(stack_, variant_);
            if (c == MergeCase::None)
                break;
            const Length cost = apply_case(stack_, c, variant_);
            sink(event_kind(c), cost, stack_);
        }
    }

    template <class Sink>
    void force_collapse(Sink&& sink)
    {
        while (stack_.height() > 1) {
            const Length cost = stack_.merge_at(1);
            sink(EventKind::Force, cost, stack_);
        }
    }

private:
    PolicyVariant variant_;
    StackState stack_;
};

struct Trace {
    PolicyVariant variant = PolicyVariant::Patched;
    RunProfile profile;
    std::optional<std::size_t> capacity;
    std::vector<TraceEvent> events;

    Length main_loop_cost() const;
    Length force_cost() const;
    Length total_cost() const { return main_loop_cost() + force_cost(); }
    std::size_t max_height() const;
    std::size_t overflow_count() const;
    /// Stack at the end of the main loop, before the forced collapse.
    std::vector<Length> main_loop_final() const;
};

std::vector<TraceEvent> push_run(StackState& stack, Length length, PolicyVariant variant);
std::vector<TraceEvent> force_collapse(StackState& stack);

Trace simulate(const RunProfile& profile, PolicyVariant variant, std::optional<std::size_t> capacity = std::nullopt);

/// Aggregates of a simulation, without per-event snapshots.
struct SimulationSummary {
    Length main_loop_cost = 0;
    Length force_cost = 0;
    std::size_t max_height = 0;
    std::size_t overflow_count = 0;
    std::size_t merges[4] = {0, 0, 0, 0}; // counts of #2..#5

    Length total_cost() const { return main_loop_cost + force_cost; }
};

SimulationSummary simulate_summary(const RunProfile& profile, PolicyVariant variant,
                                   std::optional<std::size_t> capacity = std::nullopt);

// ---------------------------------------------------------------------------
// Reference cascade: merge_collapse transcribed as the two-branch test
//
//   if (h > 2 and r3 <= r2 + r1) or (patched and h > 3 and r4 <= r3 + r2):
//       merge (R2,R3) if r3 < r1 else (R1,R2)
//   elif h > 1 and r2 <= r1: merge (R1,R2)
//   else stop
//
// Kept separate from select_case so the two can be checked against each other.

enum class MergeAction { None, MergeTop, MergeBelow };

MergeAction select_case_reference(const StackState& stack, PolicyVariant variant);

struct MergeStep {
    MergeAction action = MergeAction::None;
    std::size_t height = 0; // stack height just before the merge
    Length cost = 0;

    friend bool operator==(const MergeStep&, const MergeStep&) = default;
};

/// Main-loop merges performed by the reference cascade, in order.
std::vector<MergeStep> reference_merge_sequence(const RunProfile& profile, PolicyVariant variant);

/// Main-loop merges recorded in a trace, in the same form.
std::vector<MergeStep> merge_sequence(const Trace& trace);

} // namespace mergelab
