#include "mergelab/analysis.hpp"

#include "mergelab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mergelab {

const Constants& constants()
{
    static const Constants c = [] {
        Constants k{};
        k.phi = (1.0 + std::sqrt(5.0)) / 2.0;
        k.alpha_inf = 2.0 + std::sqrt(7.0);
        k.delta = std::pow(5.0 / k.alpha_inf, 0.2);
        k.Delta = std::pow(1.0 + std::sqrt(7.0), 0.2);
        k.kappa = 1.5;
        k.gamma_start = 8.0 + 6.0 * std::sqrt(2.0);
        k.theta = k.alpha_inf / (2.0 * k.alpha_inf - 1.0);
        return k;
    }();
    return c;
}

namespace {

// a <= b up to the relative tolerance.
bool le(double a, double b)
{
    return a <= b + kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string describe(std::span<const Length> s)
{
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < s.size(); ++i)
        out << (i ? "," : "") << s[i];
    out << ']';
    return out.str();
}

double merge_potential_gain(Length a, Length b)
{
    return potential(a + b) - potential(a) - potential(b);
}

} // namespace

double entropy(const RunProfile& profile)
{
    if (profile.size() <= 1)
        return 0.0;
    const auto n = static_cast<double>(profile.total());
    double h = 0;
    for (Length r : profile) {
        const double p = static_cast<double>(r) / n;
        h -= p * std::log2(p);
    }
    return std::max(0.0, h);
}

std::vector<std::size_t> check_python_invariant(std::span<const Length> s)
{
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const bool grows = s[i + 1] > s[i];
        const bool fib = i + 2 >= s.size() || s[i + 2] > s[i + 1] + s[i];
        if (!grows || !fib)
            bad.push_back(i + 1);
    }
    return bad;
}

std::vector<std::size_t> obstruction_indices(std::span<const Length> s)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 3; i <= s.size(); ++i)
        if (s[i - 1] <= s[i - 2] + s[i - 3])
            out.push_back(i);
    return out;
}

bool check_domination(std::span<const Length> s)
{
    const double a = constants().alpha_inf;
    for (std::size_t i = 4; i <= s.size(); ++i)
        if (!(s[i - 2] < s[i - 1]))
            return false;
    Length prefix = 0; // r_2 + ... + r_{i-1}
    for (std::size_t i = 3; i <= s.size(); ++i) {
        prefix += s[i - 2];
        if (!le(static_cast<double>(prefix), a * static_cast<double>(s[i - 1])))
            return false;
    }
    return true;
}

bool check_interior_invariant(std::span<const Length> s)
{
    for (std::size_t i = 3; i + 2 <= s.size(); ++i)
        if (!(s[i - 1] + s[i] < s[i + 1]))
            return false;
    return true;
}

bool check_stable_growth(std::span<const Length> s)
{
    for (std::size_t i = 1; i <= s.size(); ++i)
        for (std::size_t j = i; j <= s.size(); ++j) {
            const double bound =
                std::exp2((static_cast<double>(i) + 1.0 - static_cast<double>(j)) / 2.0) * static_cast<double>(s[j - 1]);
            if (!le(static_cast<double>(s[i - 1]), bound))
                return false;
        }
    return true;
}

bool check_r4_dominates(std::span<const Length> s)
{
    if (s.size() < 4)
        return true;
    return s[1] < s[3] && s[2] < s[3];
}

bool check_phi_prefix_sums(std::span<const Length> s)
{
    const double phi = constants().phi;
    Length prefix = 0;
    for (std::size_t i = 3; i <= s.size(); ++i) {
        prefix += s[i - 2];
        // strict inequality; equality is impossible for integers and irrational phi
        if (!(static_cast<double>(prefix) < phi * static_cast<double>(s[i - 1]) * (1 + kRelTol)))
            return false;
    }
    return true;
}

Ratio Ratio::reduced() const
{
    if (num == 0)
        return {0, 1};
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

Ratio stack_expansion_ratio(std::span<const Length> s)
{
    Ratio best{0, 1};
    Length prefix = 0;
    for (std::size_t i = 2; i <= s.size(); ++i) {
        prefix += s[i - 2];
        const Ratio r{prefix, s[i - 1]};
        if (best < r)
            best = r;
    }
    return best.reduced();
}

Ratio alpha_estimate(const Trace& trace)
{
    Ratio best{0, 1};
    const std::vector<Length>* prev = nullptr;
    for (const auto& e : trace.events) {
        if (e.kind == EventKind::Push && prev) {
            const Ratio r = stack_expansion_ratio(*prev);
            if (best < r)
                best = r;
        }
        if (e.kind == EventKind::Force)
            break;
        prev = &e.snapshot;
    }
    const Ratio last = stack_expansion_ratio(trace.main_loop_final());
    if (best < last)
        best = last;
    return best.reduced();
}

Ratio alpha_estimate(std::span<const Trace> traces)
{
    Ratio best{0, 1};
    for (const auto& t : traces) {
        const Ratio r = alpha_estimate(t);
        if (best < r)
            best = r;
    }
    return best;
}

double expansion_f(double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("expansion_f: x must lie in [0, 1]");
    const double a = constants().alpha_inf;
    if (x <= 0.5)
        return (1.0 + a) * x;
    if (x <= constants().theta)
        return x + a * (1.0 - x);
    return a * x;
}

double potential(Length r)
{
    if (r <= 1)
        return 0.0;
    const auto x = static_cast<double>(r);
    return 1.5 * x * std::log2(x);
}

// --- segmentation ---------------------------------------------------------------

Segmentation segment_trace(const Trace& trace)
{
    Segmentation seg;
    bool starting = false;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const auto& e = trace.events[i];
        if (e.kind == EventKind::Push) {
            Piece p;
            p.push_event = i;
            p.pushed = e.snapshot.empty() ? 0 : e.snapshot.front();
            p.starting.push_back(i);
            seg.pieces.push_back(std::move(p));
            starting = true;
        } else if (is_merge(e.kind) && !seg.pieces.empty()) {
            Piece& p = seg.pieces.back();
            if (starting && e.kind == EventKind::Merge2) {
                p.starting.push_back(i);
            } else {
                starting = false;
                p.ending.push_back(i);
            }
        }
    }
    return seg;
}

std::vector<WordPiece> segment_word(std::span<const EventKind> word)
{
    std::vector<WordPiece> out;
    bool starting = false;
    for (EventKind k : word) {
        if (k == EventKind::Push) {
            out.push_back({{k}, {}});
            starting = true;
        } else if (is_merge(k) && !out.empty()) {
            if (starting && k == EventKind::Merge2) {
                out.back().starting.push_back(k);
            } else {
                starting = false;
                out.back().ending.push_back(k);
            }
        }
    }
    return out;
}

bool ending_grammar_ok(std::span<const EventKind> ending)
{
    auto is_x = [](EventKind k) { return is_merge(k) && k != EventKind::Merge2; };
    for (std::size_t i = 0; i + 1 < ending.size(); ++i) {
        if (ending[i] == EventKind::Merge2 && ending[i + 1] == EventKind::Merge2)
            return false;
        if (i + 2 < ending.size() && is_x(ending[i]) && is_x(ending[i + 1]) && ending[i + 2] == EventKind::Merge2)
            return false;
    }
    return true;
}

bool check_ending_grammar(const Segmentation& seg, const Trace& trace)
{
    for (const auto& p : seg.pieces) {
        std::vector<EventKind> word;
        for (std::size_t i : p.ending)
            word.push_back(trace.events[i].kind);
        if (!ending_grammar_ok(word))
            return false;
    }
    return true;
}

namespace {

// Lengths (a, b) merged by a main-loop event applied to the stack `before`.
std::pair<Length, Length> merged_pair(EventKind k, std::span<const Length> before)
{
    if (k == EventKind::Merge2)
        return {before[1], before[2]};
    return {before[0], before[1]};
}

} // namespace

bool check_ending_potential(const Segmentation& seg, const Trace& trace)
{
    for (const auto& p : seg.pieces) {
        double cost = 0;
        double gain = 0;
        for (std::size_t i : p.ending) {
            const auto& e = trace.events[i];
            const auto [a, b] = merged_pair(e.kind, trace.events[i - 1].snapshot);
            cost += static_cast<double>(e.cost);
            gain += merge_potential_gain(a, b);
        }
        if (!le(cost, gain + static_cast<double>(p.pushed)))
            return false;
    }
    return true;
}

bool check_starting_cost(const Segmentation& seg, const Trace& trace)
{
    const double gamma = constants().gamma_start;
    for (const auto& p : seg.pieces) {
        double cost = 0;
        for (std::size_t i : p.starting)
            cost += static_cast<double>(trace.events[i].cost);
        if (!le(cost, gamma * static_cast<double>(p.pushed)))
            return false;
    }
    return true;
}

// --- bounds -------------------------------------------------------------------------

HeightBounds height_bound(std::uint64_t n, PolicyVariant variant)
{
    if (n == 0)
        throw std::invalid_argument("height_bound: n must be positive");
    HeightBounds hb;
    const double ln = std::log(static_cast<double>(n));
    if (variant == PolicyVariant::Unpatched) {
        hb.bound = 3.0 + ln / std::log(constants().Delta);
        hb.loose = 7.0 + ln / std::log(constants().delta);
        return hb;
    }
    // Smallest h with fib_tower_sum(h) > n.
    Length a = 1, b = 2, sum = 0;
    std::size_t h = 0;
    for (;;) {
        ++h;
        const Length level = h == 1 ? 1 : h == 2 ? 2 : a + b + 1;
        if (h >= 3) {
            a = b;
            b = level;
        }
        if (sum > std::numeric_limits<Length>::max() - level || sum + level > n)
            break;
        sum += level;
    }
    hb.bound = static_cast<double>(h);
    return hb;
}

double starting_height_bound(std::uint64_t n, Length r)
{
    return 4.0 + 2.0 * std::log2(static_cast<double>(n) / static_cast<double>(r));
}

// --- TraceMonitor ----------------------------------------------------------------------

namespace {

constexpr const char* kCheckNames[] = {
    "replay",          "mass_conservation", "final_single_run", "height_bound",   "stable_invariant",
    "stable_growth",   "interior_invariant", "r4_dominates",    "phi_prefix_sums", "ending_top_ratio",
    "merge2_ratio",    "ending_grammar",    "starting_cost",    "ending_potential", "starting_height",
    "cost_envelope",   "domination",        "ending_top_bound", "alpha_bound",     "no_merge5",
};

} // namespace

TraceMonitor::TraceMonitor(PolicyVariant variant, RunProfile profile, std::optional<std::size_t> capacity,
                           AuditOptions options)
    : variant_(variant), profile_(std::move(profile)), capacity_(capacity), options_(options)
{
    results_.resize(CheckCount);
    for (std::size_t i = 0; i < CheckCount; ++i)
        results_[i].name = kCheckNames[i];
}

void TraceMonitor::tally(Check c, bool ok, std::span<const Length> s)
{
    auto& r = results_[c];
    ++r.checked;
    if (ok)
        return;
    if (r.violations++ == 0)
        r.first_violation = "event " + std::to_string(event_index_) + " stack " + describe(s);
}

void TraceMonitor::on_stable(std::span<const Length> s)
{
    const Ratio r = stack_expansion_ratio(s);
    if (alpha_ < r)
        alpha_ = r;
    if (variant_ == PolicyVariant::Patched) {
        tally(StableInvariant, check_python_invariant(s).empty(), s);
        tally(StableGrowth, check_stable_growth(s), s);
    }
}

void TraceMonitor::on_main_snapshot(std::span<const Length> s)
{
    if (variant_ == PolicyVariant::Patched) {
        tally(InteriorInvariant, check_interior_invariant(s), s);
        tally(R4Dominates, check_r4_dominates(s), s);
        tally(PhiPrefixSums, check_phi_prefix_sums(s), s);
    } else {
        tally(Domination, check_domination(s), s);
    }
}

// Called with the stack at the moment the starting sequence of the current
// piece is over.
void TraceMonitor::end_starting(std::span<const Length> s)
{
    in_starting_ = false;
    if (variant_ == PolicyVariant::Patched) {
        tally(StartingHeight,
              le(static_cast<double>(s.size()), starting_height_bound(profile_.total(), piece_run_)), s);
    } else if (s.size() >= 3) {
        tally(EndingTopBound, le(static_cast<double>(s[0]), constants().alpha_inf * static_cast<double>(s[2])), s);
    }
}

void TraceMonitor::close_piece()
{
    if (!have_piece_)
        return;
    if (in_starting_)
        end_starting(prev_);
    have_piece_ = false;
    if (variant_ != PolicyVariant::Patched)
        return;
    const auto r = static_cast<double>(piece_run_);
    tally(EndingGrammar, ending_grammar_ok(ending_word_), prev_);
    tally(StartingCost, le(static_cast<double>(starting_cost_), constants().gamma_start * r), prev_);
    tally(EndingPotential, le(static_cast<double>(ending_cost_), ending_pot_ + r), prev_);
}

void TraceMonitor::feed(EventKind kind, Length cost, std::span<const Length> snap)
{
    const std::span<const Length> prev(prev_);
    max_height_ = std::max(max_height_, snap.size());
    if (!saw_event_ && kind != EventKind::Push)
        tally(Replay, false, snap);
    saw_event_ = true;

    auto same_tail = [&](std::size_t skip_snap, std::size_t skip_prev) {
        if (snap.size() < skip_snap || prev.size() < skip_prev)
            return false;
        return std::equal(snap.begin() + static_cast<std::ptrdiff_t>(skip_snap), snap.end(),
                          prev.begin() + static_cast<std::ptrdiff_t>(skip_prev), prev.end());
    };

    switch (kind) {
    case EventKind::Push: {
        bool ok = !in_force_ && pushes_ < profile_.size() && snap.size() == prev.size() + 1 &&
                  snap[0] == profile_[pushes_] && same_tail(1, 0) &&
                  select_case(StackState(prev_), variant_) == MergeCase::None;
        tally(Replay, ok, snap);
        close_piece();
        if (!prev.empty())
            on_stable(prev);
        ++pushes_;
        pushed_total_ += snap.empty() ? 0 : snap[0];
        have_piece_ = true;
        in_starting_ = true;
        piece_run_ = snap.empty() ? 0 : snap[0];
        starting_cost_ = ending_cost_ = 0;
        ending_pot_ = 0;
        ending_word_.clear();
        on_main_snapshot(snap);
        break;
    }
    case EventKind::Overflow:
        tally(Replay, !in_force_ && std::equal(snap.begin(), snap.end(), prev.begin(), prev.end()) && capacity_ &&
                          snap.size() > *capacity_,
              snap);
        break;
    case EventKind::Merge2:
    case EventKind::Merge3:
    case EventKind::Merge4:
    case EventKind::Merge5: {
        const MergeCase expected = prev.empty() ? MergeCase::None : select_case(StackState(prev_), variant_);
        bool ok = !in_force_ && have_piece_ && expected != MergeCase::None && event_kind(expected) == kind;
        if (ok) {
            StackState s(prev_);
            const Length c = apply_case(s, expected, variant_);
            const auto after = s.top_down();
            ok = c == cost && std::equal(after.begin(), after.end(), snap.begin(), snap.end());
        }
        tally(Replay, ok, snap);
        if (variant_ == PolicyVariant::Unpatched)
            tally(NoMerge5, kind != EventKind::Merge5, snap);
        main_cost_ += cost;
        if (prev.size() < (kind == EventKind::Merge2 ? 3u : 2u))
            break;

        if (in_starting_ && kind == EventKind::Merge2) {
            starting_cost_ += cost;
        } else {
            if (in_starting_)
                end_starting(prev);
            const auto [a, b] = merged_pair(kind, prev);
            ending_cost_ += cost;
            ending_pot_ += merge_potential_gain(a, b);
            ending_word_.push_back(kind);
            if (variant_ == PolicyVariant::Patched) {
                const double phi2 = constants().phi * constants().phi;
                if (snap.size() >= 2)
                    tally(EndingTopRatio, static_cast<double>(snap[0]) < phi2 * static_cast<double>(snap[1]), snap);
            } else if (snap.size() >= 3) {
                tally(EndingTopBound,
                      le(static_cast<double>(snap[0]), constants().alpha_inf * static_cast<double>(snap[2])), snap);
            }
        }
        if (variant_ == PolicyVariant::Patched && kind == EventKind::Merge2 && snap.size() >= 2) {
            const double phi2 = constants().phi * constants().phi;
            tally(Merge2Ratio, static_cast<double>(snap[1]) < phi2 * static_cast<double>(snap[0]), snap);
        }
        on_main_snapshot(snap);
        break;
    }
    case EventKind::Force: {
        if (!in_force_) {
            close_piece();
            tally(Replay, pushes_ == profile_.size() && select_case(StackState(prev_), variant_) == MergeCase::None,
                  prev);
            on_stable(prev);
            in_force_ = true;
        }
        bool ok = prev.size() >= 2 && snap.size() + 1 == prev.size() && snap[0] == prev[0] + prev[1] &&
                  cost == snap[0] && same_tail(1, 2);
        tally(Replay, ok, snap);
        force_cost_ += cost;
        break;
    }
    }

    Length mass = 0;
    for (Length r : snap)
        mass += r;
    tally(Mass, mass == pushed_total_, snap);

    prev_.assign(snap.begin(), snap.end());
    ++event_index_;
}

std::vector<CheckResult> TraceMonitor::finish()
{
    const std::span<const Length> last(prev_);
    if (!in_force_) {
        close_piece();
        on_stable(last);
    }
    tally(Replay, pushes_ == profile_.size(), last);
    tally(FinalHeight, prev_.size() == 1, last);

    const std::uint64_t n = profile_.total();
    tally(HeightBound, le(static_cast<double>(max_height_), height_bound(n, variant_).bound), last);
    if (variant_ == PolicyVariant::Patched) {
        const double nd = static_cast<double>(n);
        const double limit = constants().kappa * nd * entropy(profile_) + options_.envelope * nd;
        tally(CostEnvelope, le(static_cast<double>(main_cost_), limit), last);
    } else {
        tally(AlphaBound, le(alpha_.value(), constants().alpha_inf), last);
    }

    static constexpr Check common[] = {Replay, Mass, FinalHeight, HeightBound};
    static constexpr Check patched[] = {StableInvariant, StableGrowth,   InteriorInvariant, R4Dominates,
                                        PhiPrefixSums,   EndingTopRatio, Merge2Ratio,       EndingGrammar,
                                        StartingCost,    EndingPotential, StartingHeight,   CostEnvelope};
    static constexpr Check unpatched[] = {Domination, EndingTopBound, AlphaBound, NoMerge5};

    std::vector<CheckResult> out;
    for (Check c : common)
        out.push_back(results_[c]);
    if (variant_ == PolicyVariant::Patched)
        for (Check c : patched)
            out.push_back(results_[c]);
    else
        for (Check c : unpatched)
            out.push_back(results_[c]);
    return out;
}

std::vector<CheckResult> audit_trace(const Trace& trace, const AuditOptions& options)
{
    TraceMonitor monitor(trace.variant, trace.profile, trace.capacity, options);
    for (const auto& e : trace.events)
        monitor.feed(e.kind, e.cost, e.snapshot);
    return monitor.finish();
}

namespace {

struct MonitorSink {
    TraceMonitor* monitor;
    std::vector<Length>* scratch;
    void operator()(EventKind k, Length cost, const StackState& s) const
    {
        scratch->resize(s.height());
        for (std::size_t i = 0; i < s.height(); ++i)
            (*scratch)[i] = s.r(i + 1);
        monitor->feed(k, cost, *scratch);
    }
};

void run_monitored(TraceMonitor& monitor, const RunProfile& profile, PolicyVariant variant,
                   std::optional<std::size_t> capacity)
{
    Simulator sim(variant, capacity);
    std::vector<Length> scratch;
    MonitorSink sink{&monitor, &scratch};
    for (Length r : profile)
        sim.push(r, sink);
    sim.force_collapse(sink);
}

} // namespace

std::vector<CheckResult> audit_profile(const RunProfile& profile, PolicyVariant variant, const AuditOptions& options,
                                       std::optional<std::size_t> capacity)
{
    TraceMonitor monitor(variant, profile, capacity, options);
    run_monitored(monitor, profile, variant, capacity);
    return monitor.finish();
}

CorpusAudit audit_corpus(std::span<const RunProfile> profiles, PolicyVariant variant, const AuditOptions& options,
                         unsigned threads)
{
    struct Partial {
        std::vector<CheckResult> checks;
        Ratio alpha;
    };
    auto audit_range = [&](std::size_t lo, std::size_t hi) {
        Partial part;
        for (std::size_t i = lo; i < hi; ++i) {
            TraceMonitor monitor(variant, profiles[i], std::nullopt, options);
            run_monitored(monitor, profiles[i], variant, std::nullopt);
            auto checks = monitor.finish();
            if (part.alpha < monitor.alpha())
                part.alpha = monitor.alpha();
            if (part.checks.empty()) {
                part.checks = std::move(checks);
                for (auto& c : part.checks)
                    if (!c.first_violation.empty())
                        c.first_violation = "profile " + std::to_string(i) + ": " + c.first_violation;
                continue;
            }
            for (std::size_t k = 0; k < checks.size(); ++k) {
                auto& acc = part.checks[k];
                acc.checked += checks[k].checked;
                if (checks[k].violations && acc.violations == 0)
                    acc.first_violation = "profile " + std::to_string(i) + ": " + checks[k].first_violation;
                acc.violations += checks[k].violations;
            }
        }
        return part;
    };

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t count = profiles.size();
    const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(1, count));
    std::vector<Partial> parts(chunks);
    if (chunks <= 1) {
        parts[0] = audit_range(0, count);
    } else {
        std::vector<std::future<Partial>> futures;
        for (std::size_t c = 0; c < chunks; ++c)
            futures.push_back(std::async(std::launch::async, audit_range, count * c / chunks, count * (c + 1) / chunks));
        for (std::size_t c = 0; c < chunks; ++c)
            parts[c] = futures[c].get();
    }

    CorpusAudit out;
    out.profiles = count;
    for (auto& part : parts) {
        if (out.alpha < part.alpha)
            out.alpha = part.alpha;
        if (part.checks.empty())
            continue;
        if (out.checks.empty()) {
            out.checks = std::move(part.checks);
            continue;
        }
        for (std::size_t k = 0; k < part.checks.size(); ++k) {
            auto& acc = out.checks[k];
            acc.checked += part.checks[k].checked;
            if (part.checks[k].violations && acc.violations == 0)
                acc.first_violation = part.checks[k].first_violation;
            acc.violations += part.checks[k].violations;
        }
    }
    out.alpha = out.alpha.reduced();
    return out;
}

bool all_passed(std::span<const CheckResult> checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

// --- reports -------------------------------------------------------------------------

bool CostReport::all_satisfied() const
{
    return std::all_of(bound_checks.begin(), bound_checks.end(), [](const auto& kv) { return kv.second.satisfied; });
}

CostReport report(const RunProfile& profile, PolicyVariant variant, const AuditOptions& options)
{
    TraceMonitor monitor(variant, profile, std::nullopt, options);
    run_monitored(monitor, profile, variant, std::nullopt);
    const auto checks = monitor.finish();

    CostReport rep;
    rep.variant = variant;
    rep.n = profile.total();
    rep.rho = profile.size();
    rep.entropy = entropy(profile);
    rep.main_loop_cost = monitor.main_loop_cost();
    rep.force_cost = monitor.force_cost();
    rep.total_cost = rep.main_loop_cost + rep.force_cost;
    rep.max_height = monitor.max_height();
    rep.alpha = monitor.alpha().reduced();

    const auto n = static_cast<double>(rep.n);
    rep.reference_lower = std::max(0.0, n * rep.entropy - 3.0 * n);
    if (rep.entropy > 0)
        rep.cost_per_nh = static_cast<double>(rep.total_cost) / (n * rep.entropy);
    if (rep.rho > 1)
        rep.cost_per_nlogrho = static_cast<double>(rep.total_cost) / (n * std::log2(static_cast<double>(rep.rho)));

    for (const auto& c : checks)
        rep.bound_checks[c.name] = {static_cast<double>(c.violations), 0.0, c.passed()};

    const double hb = height_bound(rep.n, variant).bound;
    rep.bound_checks["height_bound"] = {static_cast<double>(rep.max_height), hb,
                                        le(static_cast<double>(rep.max_height), hb)};
    if (variant == PolicyVariant::Patched) {
        const double limit = constants().kappa * n * rep.entropy + options.envelope * n;
        rep.bound_checks["cost_envelope"] = {static_cast<double>(rep.main_loop_cost), limit,
                                             le(static_cast<double>(rep.main_loop_cost), limit)};
    } else {
        rep.bound_checks["alpha_bound"] = {rep.alpha.value(), constants().alpha_inf,
                                           le(rep.alpha.value(), constants().alpha_inf)};
    }
    return rep;
}

} // namespace mergelab
