#include "mergelab/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace mergelab {

std::string_view to_string(PolicyVariant v)
{
    return v == PolicyVariant::Patched ? "patched" : "unpatched";
}

std::string_view to_string(EventKind k)
{
    switch (k) {
    case EventKind::Push: return "PUSH";
    case EventKind::Merge2: return "M2";
    case EventKind::Merge3: return "M3";
    case EventKind::Merge4: return "M4";
    case EventKind::Merge5: return "M5";
    case EventKind::Force: return "F";
    case EventKind::Overflow: return "OV";
    }
    return "?";
}

std::optional<PolicyVariant> parse_variant(std::string_view s)
{
    if (s == "patched" || s == "python")
        return PolicyVariant::Patched;
    if (s == "unpatched" || s == "java")
        return PolicyVariant::Unpatched;
    return std::nullopt;
}

std::optional<EventKind> parse_event_kind(std::string_view s)
{
    for (EventKind k : {EventKind::Push, EventKind::Merge2, EventKind::Merge3, EventKind::Merge4, EventKind::Merge5,
                        EventKind::Force, EventKind::Overflow}) {
        if (to_string(k) == s)
            return k;
    }
    return std::nullopt;
}

bool is_merge(EventKind k)
{
    return k == EventKind::Merge2 || k == EventKind::Merge3 || k == EventKind::Merge4 || k == EventKind::Merge5;
}

EventKind event_kind(MergeCase c)
{
    switch (c) {
    case MergeCase::Merge2: return EventKind::Merge2;
    case MergeCase::Merge3: return EventKind::Merge3;
    case MergeCase::Merge4: return EventKind::Merge4;
    case MergeCase::Merge5: return EventKind::Merge5;
    case MergeCase::None: break;
    }
    throw std::logic_error("no event for MergeCase::None");
}

// --- StackState -------------------------------------------------------------

StackState::StackState(const std::vector<Length>& top_down, std::optional<std::size_t> capacity)
    : runs_(top_down.rbegin(), top_down.rend()), capacity_(capacity)
{
    for (Length r : runs_) {
        if (r == 0)
            throw std::invalid_argument("run lengths must be positive");
        total_ += r;
    }
}

std::vector<Length> StackState::top_down() const
{
    return {runs_.rbegin(), runs_.rend()};
}

void StackState::push(Length length)
{
    runs_.push_back(length);
    total_ += length;
}

Length StackState::merge_at(std::size_t i)
{
    if (i < 1 || i + 1 > runs_.size())
        throw std::logic_error("illegal merge");
    const std::size_t upper = runs_.size() - i; // R_i
    const std::size_t lower = upper - 1;        // R_{i+1}
    runs_[lower] += runs_[upper];
    runs_.erase(runs_.begin() + static_cast<std::ptrdiff_t>(upper));
    return runs_[lower];
}

// --- case selection ---------------------------------------------------------

MergeCase select_case(std::size_t h, Length r1, Length r2, Length r3, Length r4, PolicyVariant variant)
{
    if (h >= 3 && r1 > r3)
        return MergeCase::Merge2;
    if (h >= 2 && r1 >= r2)
        return MergeCase::Merge3;
    if (h >= 3 && r1 + r2 >= r3)
        return MergeCase::Merge4;
    if (variant == PolicyVariant::Patched && h >= 4 && r2 + r3 >= r4)
        return MergeCase::Merge5;
    return MergeCase::None;
}

MergeCase select_case(const StackState& s, PolicyVariant variant)
{
    const std::size_t h = s.height();
    return select_case(h, h >= 1 ? s.r(1) : 0, h >= 2 ? s.r(2) : 0, h >= 3 ? s.r(3) : 0, h >= 4 ? s.r(4) : 0,
                       variant);
}

Length apply_case(StackState& s, MergeCase c, PolicyVariant variant)
{
    const std::size_t h = s.height();
    auto r = [&](std::size_t i) { return s.r(i); };
    bool legal = false;
    switch (c) {
    case MergeCase::Merge2: legal = h >= 3 && r(1) > r(3); break;
    case MergeCase::Merge3: legal = h >= 2 && r(1) >= r(2); break;
    case MergeCase::Merge4: legal = h >= 3 && r(1) + r(2) >= r(3); break;
    case MergeCase::Merge5:
        legal = variant == PolicyVariant::Patched && h >= 4 && r(2) + r(3) >= r(4);
        break;
    case MergeCase::None: break;
    }
    if (!legal)
        throw std::logic_error("illegal merge");
    return s.merge_at(c == MergeCase::Merge2 ? 2 : 1);
}

// --- traces -----------------------------------------------------------------

Length Trace::main_loop_cost() const
{
    Length total = 0;
    for (const auto& e : events)
        if (is_merge(e.kind))
            total += e.cost;
    return total;
}

Length Trace::force_cost() const
{
    Length total = 0;
    for (const auto& e : events)
        if (e.kind == EventKind::Force)
            total += e.cost;
    return total;
}

std::size_t Trace::max_height() const
{
    std::size_t h = 0;
    for (const auto& e : events)
        h = std::max(h, e.snapshot.size());
    return h;
}

std::size_t Trace::overflow_count() const
{
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const TraceEvent& e) { return e.kind == EventKind::Overflow; }));
}

std::vector<Length> Trace::main_loop_final() const
{
    for (auto it = events.rbegin(); it != events.rend(); ++it)
        if (it->kind != EventKind::Force)
            return it->snapshot;
    return {};
}

namespace {

struct Recorder {
    std::vector<TraceEvent>* out;
    void operator()(EventKind k, Length cost, const StackState& s) const { out->push_back({k, cost, s.top_down()}); }
};

void collapse_into(StackState& stack, PolicyVariant variant, std::vector<TraceEvent>& out)
{
    for (;;) {
        const MergeCase c = select_case(stack, variant);
        if (c == MergeCase::None)
            return;
        const Length cost = apply_case(stack, c, variant);
        out.push_back({event_kind(c), cost, stack.top_down()});
    }
}

} // namespace

std::vector<TraceEvent> push_run(StackState& stack, Length length, PolicyVariant variant)
{
    if (length == 0)
        throw std::invalid_argument("run lengths must be positive");
    std::vector<TraceEvent> out;
    stack.push(length);
    out.push_back({EventKind::Push, 0, stack.top_down()});
    if (stack.over_capacity())
        out.push_back({EventKind::Overflow, 0, stack.top_down()});
    collapse_into(stack, variant, out);
    return out;
}

std::vector<TraceEvent> force_collapse(StackState& stack)
{
    std::vector<TraceEvent> out;
    while (stack.height() > 1) {
        const Length cost = stack.merge_at(1);
        out.push_back({EventKind::Force, cost, stack.top_down()});
    }
    return out;
}

Trace simulate(const RunProfile& profile, PolicyVariant variant, std::optional<std::size_t> capacity)
{
    Trace trace;
    trace.variant = variant;
    trace.profile = profile;
    trace.capacity = capacity;
    trace.events.reserve(2 * profile.size());

    Simulator sim(variant, capacity);
    Recorder rec{&trace.events};
    for (Length r : profile)
        sim.push(r, rec);
    sim.force_collapse(rec);
    return trace;
}

SimulationSummary simulate_summary(const RunProfile& profile, PolicyVariant variant,
                                   std::optional<std::size_t> capacity)
{
    SimulationSummary sum;
    Simulator sim(variant, capacity);
    auto sink = [&](EventKind k, Length cost, const StackState& s) {
        sum.max_height = std::max(sum.max_height, s.height());
        switch (k) {
        case EventKind::Merge2: ++sum.merges[0]; sum.main_loop_cost += cost; break;
        case EventKind::Merge3: ++sum.merges[1]; sum.main_loop_cost += cost; break;
        case EventKind::Merge4: ++sum.merges[2]; sum.main_loop_cost += cost; break;
        case EventKind::Merge5: ++sum.merges[3]; sum.main_loop_cost += cost; break;
        case EventKind::Force: sum.force_cost += cost; break;
        case EventKind::Overflow: ++sum.overflow_count; break;
        case EventKind::Push: break;
        }
    };
    for (Length r : profile)
        sim.push(r, sink);
    sim.force_collapse(sink);
    return sum;
}

// --- reference cascade --------------------------------------------------------

MergeAction select_case_reference(const StackState& s, PolicyVariant variant)
{
    const std::size_t h = s.height();
    if (h <= 1)
        return MergeAction::None;
    const std::size_t n = h - 2;
    const bool three = n > 0 && s.r(3) <= s.r(2) + s.r(1);
    const bool four = variant == PolicyVariant::Patched && n > 1 && s.r(4) <= s.r(3) + s.r(2);
    if (three || four)
        return s.r(3) < s.r(1) ? MergeAction::MergeBelow : MergeAction::MergeTop;
    if (s.r(2) <= s.r(1))
        return MergeAction::MergeTop;
    return MergeAction::None;
}

std::vector<MergeStep> reference_merge_sequence(const RunProfile& profile, PolicyVariant variant)
{
    std::vector<MergeStep> steps;
    StackState stack;
    for (Length r : profile) {
        stack.push(r);
        for (;;) {
            const MergeAction a = select_case_reference(stack, variant);
            if (a == MergeAction::None)
                break;
            const std::size_t h = stack.height();
            const Length cost = stack.merge_at(a == MergeAction::MergeBelow ? 2 : 1);
            steps.push_back({a, h, cost});
        }
    }
    return steps;
}

std::vector<MergeStep> merge_sequence(const Trace& trace)
{
    std::vector<MergeStep> steps;
    for (const auto& e : trace.events) {
        if (!is_merge(e.kind))
            continue;
        steps.push_back({e.kind == EventKind::Merge2 ? MergeAction::MergeBelow : MergeAction::MergeTop,
                         e.snapshot.size() + 1, e.cost});
    }
    return steps;
}

} // namespace mergelab
