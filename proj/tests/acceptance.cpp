// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "mergelab/analysis.hpp"
#include "mergelab/generators.hpp"
#include "mergelab/policy.hpp"
#include "mergelab/sorter.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

using namespace mergelab;

namespace {

using V = std::vector<Length>;

int g_failures = 0;

void verdict(const char* id, const char* what, bool ok, const std::string& detail)
{
    std::printf("%-5s %s  %s: %s\n", id, ok ? "PASS" : "FAIL", what, detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

std::string show(const V& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

// Main-loop events of a trace, i.e. everything before the first forced merge.
std::vector<TraceEvent> main_loop(const Trace& t)
{
    std::vector<TraceEvent> out;
    for (const auto& e : t.events) {
        if (e.kind == EventKind::Force)
            break;
        out.push_back(e);
    }
    return out;
}

// n log-uniform in [1, n_max]; rho log-uniform in [1, (n+1)/2].
std::vector<RunProfile> random_corpus(std::size_t count, std::uint64_t n_max, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<RunProfile> out;
    out.reserve(count);
    auto log_uniform = [&](std::uint64_t hi) {
        const double x = std::exp(rng.unit() * std::log(static_cast<double>(hi) + 1.0));
        return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(x), 1, hi);
    };
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t n = log_uniform(n_max);
        const std::uint64_t rho = log_uniform((n + 1) / 2);
        out.push_back(random_profile(n, rho, rng.next()));
    }
    return out;
}

const CheckResult* find(const CorpusAudit& a, const std::string& name)
{
    for (const auto& c : a.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

std::string summarize(const CorpusAudit& a, std::initializer_list<const char*> names, bool& ok)
{
    std::ostringstream s;
    ok = true;
    for (const char* name : names) {
        const CheckResult* c = find(a, name);
        if (!c) {
            ok = false;
            s << name << " missing; ";
            continue;
        }
        ok = ok && c->passed();
        s << name << " " << c->violations << "/" << c->checked;
        if (!c->passed())
            s << " [" << c->first_violation << "]";
        s << "; ";
    }
    std::string out = s.str();
    return out.substr(0, out.size() - 2);
}

CorpusAudit merge_audits(const std::vector<CorpusAudit>& parts)
{
    CorpusAudit out;
    for (const auto& p : parts) {
        out.profiles += p.profiles;
        if (out.alpha < p.alpha)
            out.alpha = p.alpha;
        if (out.checks.empty()) {
            out.checks = p.checks;
            continue;
        }
        for (std::size_t i = 0; i < p.checks.size(); ++i) {
            out.checks[i].checked += p.checks[i].checked;
            if (out.checks[i].violations == 0 && p.checks[i].violations)
                out.checks[i].first_violation = p.checks[i].first_violation;
            out.checks[i].violations += p.checks[i].violations;
        }
    }
    return out;
}

// --- criteria -------------------------------------------------------------------------

void ac1()
{
    using K = EventKind;
    const std::vector<TraceEvent> expected = {
        {K::Push, 0, {24}},
        {K::Push, 0, {18, 24}},
        {K::Push, 0, {50, 18, 24}},
        {K::Merge2, 42, {50, 42}},
        {K::Merge3, 92, {92}},
        {K::Push, 0, {28, 92}},
        {K::Push, 0, {20, 28, 92}},
        {K::Push, 0, {6, 20, 28, 92}},
        {K::Push, 0, {4, 6, 20, 28, 92}},
        {K::Push, 0, {8, 4, 6, 20, 28, 92}},
        {K::Merge2, 10, {8, 10, 20, 28, 92}},
        {K::Merge5, 18, {18, 20, 28, 92}},
        {K::Merge4, 38, {38, 28, 92}},
        {K::Merge3, 66, {66, 92}},
        {K::Push, 0, {1, 66, 92}},
    };
    const auto got = main_loop(simulate(paper_vector(PaperVectorId::Fig2), PolicyVariant::Patched));
    std::size_t matching = 0;
    while (matching < std::min(got.size(), expected.size()) && got[matching] == expected[matching])
        ++matching;
    const bool ok = got == expected;
    verdict("AC1", "patched trace of (24,18,50,28,20,6,4,8,1)", ok,
            std::to_string(matching) + "/15 states and labels match, " + std::to_string(got.size()) +
                " main-loop events, final " + show(got.empty() ? V{} : got.back().snapshot));
}

void ac2()
{
    const Trace t = simulate(paper_vector(PaperVectorId::Fig2), PolicyVariant::Unpatched);
    const V final = t.main_loop_final();
    const auto bad = check_python_invariant(final);
    bool triple = bad.size() == 1 && bad[0] + 2 <= final.size();
    if (triple)
        triple = final[bad[0] - 1] == 10 && final[bad[0]] == 20 && final[bad[0] + 1] == 28;
    const bool ok = final == V{1, 8, 10, 20, 28, 92} && triple;
    verdict("AC2", "unpatched trace of the same profile", ok,
            "main loop ends at " + show(final) + ", invariant flags " + std::to_string(bad.size()) +
                " position(s)" + (triple ? ", the (10,20,28) triple" : ""));
}

void ac3()
{
    const Trace t = simulate(paper_vector(PaperVectorId::Fig5), PolicyVariant::Unpatched);
    const V final = t.main_loop_final();
    const auto bad = check_python_invariant(final);
    const auto obs = obstruction_indices(final);
    const bool ok = final == V{27, 28, 56, 83, 109} && bad.size() == 2 && bad[1] == bad[0] + 1 &&
                    obs == std::vector<std::size_t>{4, 5};
    std::string where, obstructions;
    for (auto i : bad)
        where += " i=" + std::to_string(i);
    for (auto i : obs)
        obstructions += " " + std::to_string(i);
    verdict("AC3", "unpatched trace of (109,83,25,16,8,7,26,2,27)", ok,
            "main loop ends at " + show(final) + ", violations at" + where + ", obstruction indices" + obstructions);
}

void ac4()
{
    constexpr std::int64_t kSimMax = 4096;
    constexpr std::int64_t kBoundMax = std::int64_t{1} << 20;
    const auto table = rtim_cost_table(kBoundMax);

    std::int64_t first_mismatch = 0;
    for (std::int64_t n = 1; n <= kSimMax && !first_mismatch; ++n)
        if (simulate_summary(rtim(n), PolicyVariant::Patched).main_loop_cost != table[static_cast<std::size_t>(n)])
            first_mismatch = n;

    std::int64_t first_low = 0;
    double min_slack = 1e300;
    for (std::int64_t n = 1; n <= kBoundMax; ++n) {
        const double x = static_cast<double>(n);
        const double lower = 1.5 * x * std::log2(x) - 7.0 * (x + 4.0);
        const double slack = static_cast<double>(table[static_cast<std::size_t>(n)]) - lower;
        min_slack = std::min(min_slack, slack);
        if (slack < 0 && !first_low)
            first_low = n;
    }
    const bool ok = first_mismatch == 0 && first_low == 0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "simulated cost equals recurrence for n<=4096 (first mismatch %lld); lower bound holds for "
                  "n<=2^20 (first failure %lld, min slack %.1f)",
                  static_cast<long long>(first_mismatch), static_cast<long long>(first_low), min_slack);
    verdict("AC4", "R(n) cost recurrence", ok, buf);
}

struct Corpora {
    CorpusAudit patched;
    CorpusAudit unpatched;
    std::size_t random_profiles = 0;
    std::size_t rtim_profiles = 0;
};

Corpora audit_all()
{
    std::vector<RunProfile> random = random_corpus(10000, 100000, 2024);
    std::vector<RunProfile> structured;
    for (std::int64_t n = 1; n <= 4096; ++n)
        structured.push_back(rtim(n));
    for (auto id : {PaperVectorId::Fig2, PaperVectorId::Fig5, PaperVectorId::Prop81})
        structured.push_back(paper_vector(id));
    for (std::size_t h = 1; h <= 40; ++h)
        structured.push_back(fib_tower(h));

    Corpora c;
    c.random_profiles = random.size();
    c.rtim_profiles = 4096;
    for (auto v : {PolicyVariant::Patched, PolicyVariant::Unpatched}) {
        auto& out = v == PolicyVariant::Patched ? c.patched : c.unpatched;
        out = merge_audits({audit_corpus(random, v), audit_corpus(structured, v)});
    }
    return c;
}

void ac5(const Corpora& c)
{
    bool ok = false;
    const std::string detail = summarize(c.patched, {"cost_envelope"}, ok);
    verdict("AC5", "patched main-loop cost <= 1.5 n H + 20 n", ok,
            detail + " over " + std::to_string(c.patched.profiles) + " profiles (" + std::to_string(c.random_profiles) +
                " random with n <= 1e5, rtim(1..4096), published vectors, towers)");
}

void ac6()
{
    std::size_t compared = 0, mismatches = 0;
    std::string first;
    for (auto v : {PolicyVariant::Patched, PolicyVariant::Unpatched}) {
        Rng rng(v == PolicyVariant::Patched ? 61 : 62);
        for (int i = 0; i < 10000; ++i) {
            const std::uint64_t n = rng.between(1, 20000);
            const std::uint64_t rho = rng.between(1, (n + 1) / 2);
            const RunProfile p = random_profile(n, rho, rng.next());
            ++compared;
            if (reference_merge_sequence(p, v) != merge_sequence(simulate(p, v))) {
                if (!mismatches++)
                    first = std::string(to_string(v)) + " profile #" + std::to_string(i);
            }
        }
    }
    verdict("AC6", "two-branch and case cascades give identical merge sequences", mismatches == 0,
            std::to_string(mismatches) + " mismatches over " + std::to_string(compared) + " profiles" +
                (first.empty() ? "" : " (first: " + first + ")"));
}

void ac7(const Corpora& c)
{
    bool a = false, b = false, cc = false;
    const std::string da = summarize(c.patched, {"stable_invariant"}, a);
    const std::string db = summarize(c.unpatched, {"domination", "ending_top_bound"}, b);
    const std::string dc = summarize(c.patched, {"ending_grammar", "starting_cost", "ending_potential"}, cc);
    verdict("AC7a", "patched stable stacks keep the strict invariant", a, da);
    verdict("AC7b", "unpatched domination and ending-sequence top bound", b, db);
    verdict("AC7c", "patched grammar, starting cost, ending potential", cc, dc);
    bool rest = false;
    const std::string dr = summarize(c.patched,
                                     {"replay", "mass_conservation", "final_single_run", "stable_growth",
                                      "interior_invariant", "r4_dominates", "phi_prefix_sums", "ending_top_ratio",
                                      "merge2_ratio", "starting_height"},
                                     rest);
    bool urest = false;
    const std::string du = summarize(c.unpatched, {"replay", "mass_conservation", "final_single_run", "no_merge5"},
                                     urest);
    verdict("AC7", "invariant suites", a && b && cc && rest && urest,
            "patched " + dr + "; unpatched " + du);
}

void ac8(const Corpora& c)
{
    const Trace t = simulate(paper_vector(PaperVectorId::Prop81), PolicyVariant::Unpatched);
    const V final = t.main_loop_final();
    const V expected{5, 6, 12, 18, 31, 36, 68, 95, 99, 195, 276, 356, 360};
    const Ratio a = alpha_estimate(t).reduced();
    const double bound = constants().alpha_inf;
    const bool ok = final == expected && a.num == 133 && a.den == 40 && c.unpatched.alpha.value() <= bound;
    char buf[200];
    std::snprintf(buf, sizeof buf, "final stack %s, alpha %llu/%llu, corpus alpha %llu/%llu = %.6f <= %.6f",
                  final == expected ? "matches (13 runs)" : show(final).c_str(),
                  static_cast<unsigned long long>(a.num), static_cast<unsigned long long>(a.den),
                  static_cast<unsigned long long>(c.unpatched.alpha.num),
                  static_cast<unsigned long long>(c.unpatched.alpha.den), c.unpatched.alpha.value(), bound);
    verdict("AC8", "97-run witness and corpus alpha", ok, buf);
}

void ac9(const Corpora& c)
{
    bool ok_p = false, ok_u = false;
    const std::string dp = summarize(c.patched, {"height_bound"}, ok_p);
    const std::string du = summarize(c.unpatched, {"height_bound"}, ok_u);

    std::size_t searched = 0, exceed = 0;
    std::size_t tallest[2] = {0, 0};
    for (auto v : {PolicyVariant::Patched, PolicyVariant::Unpatched}) {
        for (std::uint64_t n = 1; n <= kExhaustiveSearchLimit; ++n) {
            const auto r = max_height_search(n, n, v);
            ++searched;
            if (!r.exhaustive || static_cast<double>(r.height) > height_bound(r.profile.total(), v).bound)
                ++exceed;
            if (reached_height(r.profile, v) != r.height)
                ++exceed;
            tallest[v == PolicyVariant::Patched ? 0 : 1] = std::max(tallest[v == PolicyVariant::Patched ? 0 : 1],
                                                                    r.height);
        }
    }
    const double big = height_bound(std::uint64_t{1} << 31, PolicyVariant::Unpatched).bound;
    const bool ok = ok_p && ok_u && exceed == 0 && std::lround(big) <= 86;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "exhaustive n<=30: %zu searches, %zu over bound, tallest %zu/%zu; bound at 2^31 = %.3f", searched,
                  exceed, tallest[0], tallest[1], big);
    verdict("AC9", "stack height bounds", ok, "patched " + dp + "; unpatched " + du + "; " + buf);
}

struct SortTally {
    std::size_t arrays = 0;
    std::size_t wrong = 0;
    std::size_t unstable = 0;
    std::size_t event_mismatch = 0;
    std::size_t merge_cmp_over = 0;
    std::size_t total_cmp_over = 0;
};

SortTally sort_range(std::uint64_t seed, std::size_t count)
{
    using P = std::pair<std::int64_t, std::uint32_t>;
    auto by_key = [](const P& x, const P& y) { return x.first < y.first; };
    Rng rng(seed);
    SortTally t;
    std::vector<TraceEvent> events;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = static_cast<std::size_t>(rng.between(1, 300));
        std::vector<std::int64_t> keys(n);
        if (i % 2 == 0) {
            // Uniform keys over a small range: many duplicates, short runs.
            const std::uint64_t range = rng.between(1, n);
            for (auto& k : keys)
                k = static_cast<std::int64_t>(rng.below(range));
        } else {
            // Presorted: a realized run profile with values squashed into duplicates.
            const RunProfile p = random_profile(n, rng.between(1, (n + 1) / 2), rng.next());
            keys = realize_array(p, rng.next());
            const std::int64_t squash = static_cast<std::int64_t>(rng.between(1, 4));
            for (auto& k : keys)
                k /= squash;
        }
        std::vector<P> a(n);
        for (std::uint32_t j = 0; j < n; ++j)
            a[j] = {keys[j], j};
        const auto v = i % 4 < 2 ? PolicyVariant::Patched : PolicyVariant::Unpatched;

        const RunProfile profile = profile_of(decompose(a, by_key));
        std::vector<P> reference = a;
        std::stable_sort(reference.begin(), reference.end(), by_key);
        std::vector<std::int64_t> sorted_keys = keys;
        std::sort(sorted_keys.begin(), sorted_keys.end());

        events.clear();
        const SortMetrics m = timsort_lite(a, v, by_key, &events);
        ++t.arrays;
        for (std::size_t j = 0; j < n; ++j) {
            if (a[j].first != sorted_keys[j]) {
                ++t.wrong;
                break;
            }
        }
        if (a != reference)
            ++t.unstable;
        if (events != simulate(profile, v).events)
            ++t.event_mismatch;
        if (m.merge_comparisons > m.merge_cost())
            ++t.merge_cmp_over;
        if (m.comparisons > m.merge_cost() + (n - 1))
            ++t.total_cmp_over;
    }
    return t;
}

void ac10()
{
    constexpr std::size_t kArrays = 100000;
    const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::future<SortTally>> futures;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t count = kArrays * (w + 1) / workers - kArrays * w / workers;
        futures.push_back(std::async(std::launch::async, sort_range, 1000 + w, count));
    }
    SortTally t;
    for (auto& f : futures) {
        const SortTally p = f.get();
        t.arrays += p.arrays;
        t.wrong += p.wrong;
        t.unstable += p.unstable;
        t.event_mismatch += p.event_mismatch;
        t.merge_cmp_over += p.merge_cmp_over;
        t.total_cmp_over += p.total_cmp_over;
    }
    const bool ok = t.arrays == kArrays && t.wrong == 0 && t.unstable == 0 && t.event_mismatch == 0 &&
                    t.merge_cmp_over == 0 && t.total_cmp_over == 0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "%zu arrays: %zu unsorted, %zu differ from stable reference, %zu event mismatches, %zu with merge "
                  "comparisons > merge cost, %zu with comparisons > merge cost + n - 1",
                  t.arrays, t.wrong, t.unstable, t.event_mismatch, t.merge_cmp_over, t.total_cmp_over);
    verdict("AC10", "sorting correctness, stability, simulator agreement", ok, buf);
}

} // namespace

int main()
{
    const auto start = std::chrono::steady_clock::now();
    ac1();
    ac2();
    ac3();
    ac4();
    const Corpora corpora = audit_all();
    ac5(corpora);
    ac6();
    ac7(corpora);
    ac8(corpora);
    ac9(corpora);
    ac10();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s: %d failing criteria, %.1f s\n", g_failures ? "FAIL" : "PASS", g_failures, secs);
    return g_failures ? 1 : 0;
}
