#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mergelab/generators.hpp"
#include "mergelab/policy.hpp"

#include <vector>

using namespace mergelab;

namespace {

using V = std::vector<Length>;

MergeCase case_of(const V& top_down, PolicyVariant v)
{
    return select_case(StackState(top_down), v);
}

V kinds_and_states(const std::vector<TraceEvent>& events, std::vector<EventKind>& kinds)
{
    V costs;
    for (const auto& e : events) {
        kinds.push_back(e.kind);
        costs.push_back(e.cost);
    }
    return costs;
}

} // namespace

TEST_CASE("select_case follows the cascade order")
{
    CHECK(case_of({50, 18, 24}, PolicyVariant::Patched) == MergeCase::Merge2);
    CHECK(case_of({50, 18, 24}, PolicyVariant::Unpatched) == MergeCase::Merge2);
    CHECK(case_of({8, 10, 20, 28, 92}, PolicyVariant::Patched) == MergeCase::Merge5);
    CHECK(case_of({8, 10, 20, 28, 92}, PolicyVariant::Unpatched) == MergeCase::None);
    CHECK(case_of({4, 6, 20, 28, 92}, PolicyVariant::Patched) == MergeCase::None);
    CHECK(case_of({50, 42}, PolicyVariant::Patched) == MergeCase::Merge3);
    CHECK(case_of({18, 20, 28, 92}, PolicyVariant::Patched) == MergeCase::Merge4);
    CHECK(case_of({}, PolicyVariant::Patched) == MergeCase::None);
    CHECK(case_of({5}, PolicyVariant::Patched) == MergeCase::None);
    // Height guards: #3 needs two runs, #2 and #4 three, #5 four.
    CHECK(case_of({3, 3}, PolicyVariant::Patched) == MergeCase::Merge3);
    CHECK(case_of({2, 3}, PolicyVariant::Patched) == MergeCase::None);
    CHECK(case_of({2, 3, 5}, PolicyVariant::Patched) == MergeCase::Merge4);
    CHECK(case_of({1, 3, 5}, PolicyVariant::Patched) == MergeCase::None);
    CHECK(case_of({1, 3, 5, 7}, PolicyVariant::Patched) == MergeCase::Merge5);
    CHECK(case_of({1, 3, 5, 7}, PolicyVariant::Unpatched) == MergeCase::None);
}

TEST_CASE("apply_case merges the right pair and reports the merged length")
{
    StackState s({50, 18, 24});
    CHECK(apply_case(s, MergeCase::Merge2) == 42);
    CHECK(s.top_down() == V{50, 42});
    CHECK(apply_case(s, MergeCase::Merge3) == 92);
    CHECK(s.top_down() == V{92});

    StackState t({18, 20, 28, 92});
    CHECK(apply_case(t, MergeCase::Merge4) == 38);
    CHECK(t.top_down() == V{38, 28, 92});
}

TEST_CASE("apply_case rejects merges whose guard fails")
{
    StackState s({4, 6, 20, 28, 92});
    CHECK_THROWS_WITH_AS(apply_case(s, MergeCase::Merge2), "illegal merge", std::logic_error);
    CHECK_THROWS_WITH_AS(apply_case(s, MergeCase::Merge3), "illegal merge", std::logic_error);
    CHECK_THROWS_WITH_AS(apply_case(s, MergeCase::Merge4), "illegal merge", std::logic_error);
    CHECK_THROWS_WITH_AS(apply_case(s, MergeCase::Merge5), "illegal merge", std::logic_error);
    CHECK_THROWS_WITH_AS(apply_case(s, MergeCase::None), "illegal merge", std::logic_error);
    StackState u({8, 10, 20, 28, 92});
    CHECK_THROWS_WITH_AS(apply_case(u, MergeCase::Merge5, PolicyVariant::Unpatched), "illegal merge",
                         std::logic_error);
    CHECK(s.top_down() == V{4, 6, 20, 28, 92});
    StackState tiny({7});
    CHECK_THROWS_AS(tiny.merge_at(1), std::logic_error);
}

TEST_CASE("push_run on the six-deep stack")
{
    StackState p({4, 6, 20, 28, 92});
    const auto ev = push_run(p, 8, PolicyVariant::Patched);
    std::vector<EventKind> kinds;
    const V costs = kinds_and_states(ev, kinds);
    CHECK(kinds == std::vector<EventKind>{EventKind::Push, EventKind::Merge2, EventKind::Merge5, EventKind::Merge4,
                                          EventKind::Merge3});
    CHECK(costs == V{0, 10, 18, 38, 66});
    CHECK(p.top_down() == V{66, 92});

    StackState u({4, 6, 20, 28, 92});
    const auto eu = push_run(u, 8, PolicyVariant::Unpatched);
    REQUIRE(eu.size() == 2);
    CHECK(eu[1].kind == EventKind::Merge2);
    CHECK(u.top_down() == V{8, 10, 20, 28, 92});

    StackState e;
    const auto first = push_run(e, 24, PolicyVariant::Patched);
    REQUIRE(first.size() == 1);
    CHECK(first[0].kind == EventKind::Push);
    CHECK(first[0].snapshot == V{24});
    CHECK_THROWS_AS(push_run(e, 0, PolicyVariant::Patched), std::invalid_argument);
}

TEST_CASE("force_collapse merges the top pair until one run is left")
{
    StackState s({1, 66, 92});
    const auto ev = force_collapse(s);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].kind == EventKind::Force);
    CHECK(ev[0].cost == 67);
    CHECK(ev[1].cost == 159);
    CHECK(s.top_down() == V{159});

    StackState one({12});
    CHECK(force_collapse(one).empty());

    StackState t({2, 3, 10});
    const auto et = force_collapse(t);
    REQUIRE(et.size() == 2);
    CHECK(et[0].cost == 5);
    CHECK(et[1].cost == 15);
}

TEST_CASE("simulate on the published vectors")
{
    const Trace t = simulate(paper_vector(PaperVectorId::Fig2), PolicyVariant::Patched);
    CHECK(t.main_loop_final() == V{1, 66, 92});
    CHECK(t.main_loop_cost() == 266);
    CHECK(t.force_cost() == 67 + 159);
    CHECK(t.max_height() == 6);
    CHECK(t.events.front().kind == EventKind::Push);
    CHECK(t.events.back().snapshot == V{159});

    const Trace j = simulate(paper_vector(PaperVectorId::Fig5), PolicyVariant::Unpatched);
    CHECK(j.main_loop_final() == V{27, 28, 56, 83, 109});

    const Trace single = simulate(RunProfile({40}), PolicyVariant::Patched);
    REQUIRE(single.events.size() == 1);
    CHECK(single.total_cost() == 0);
}

TEST_CASE("mass is conserved and merge costs equal the merged length")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const RunProfile p = random_profile(500 + seed * 7, 40 + seed % 60, seed);
        for (auto v : {PolicyVariant::Patched, PolicyVariant::Unpatched}) {
            const Trace t = simulate(p, v);
            Length pushed = 0;
            for (const auto& e : t.events) {
                if (e.kind == EventKind::Push)
                    pushed += e.snapshot.front();
                Length mass = 0;
                for (Length r : e.snapshot)
                    mass += r;
                REQUIRE(mass == pushed);
                if (is_merge(e.kind))
                    REQUIRE(e.cost == (e.kind == EventKind::Merge2 ? e.snapshot[1] : e.snapshot[0]));
                if (v == PolicyVariant::Unpatched)
                    REQUIRE(e.kind != EventKind::Merge5);
            }
            REQUIRE(t.events.back().snapshot.size() == 1);
        }
    }
}

TEST_CASE("capacity overflow is reported and simulation continues")
{
    const RunProfile tower = fib_tower(8);
    const Trace t = simulate(tower, PolicyVariant::Patched, 5);
    CHECK(t.overflow_count() == 3);
    CHECK(t.max_height() == 8);
    CHECK(t.events.back().snapshot == V{tower.total()});
    const Trace unbounded = simulate(tower, PolicyVariant::Patched);
    CHECK(unbounded.overflow_count() == 0);
    CHECK(unbounded.main_loop_cost() == t.main_loop_cost());
}

TEST_CASE("streaming summary matches the full trace")
{
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const RunProfile p = random_profile(3000, 200, seed);
        for (auto v : {PolicyVariant::Patched, PolicyVariant::Unpatched}) {
            const Trace t = simulate(p, v, 6);
            const auto s = simulate_summary(p, v, 6);
            CHECK(s.main_loop_cost == t.main_loop_cost());
            CHECK(s.force_cost == t.force_cost());
            CHECK(s.max_height == t.max_height());
            CHECK(s.overflow_count == t.overflow_count());
        }
    }
}

TEST_CASE("reference cascade on single stacks")
{
    CHECK(select_case_reference(StackState({50, 18, 24}), PolicyVariant::Patched) == MergeAction::MergeBelow);
    CHECK(select_case_reference(StackState({50, 42}), PolicyVariant::Patched) == MergeAction::MergeTop);
    CHECK(select_case_reference(StackState({4, 6, 20, 28, 92}), PolicyVariant::Patched) == MergeAction::None);
    CHECK(select_case_reference(StackState({8, 10, 20, 28, 92}), PolicyVariant::Patched) == MergeAction::MergeTop);
    CHECK(select_case_reference(StackState({8, 10, 20, 28, 92}), PolicyVariant::Unpatched) == MergeAction::None);
}

TEST_CASE("reference and case cascades produce identical merge sequences")
{
    for (auto v : {PolicyVariant::Patched, PolicyVariant::Unpatched}) {
        for (std::uint64_t seed = 0; seed < 10000; ++seed) {
            Rng rng(seed * 2 + 1);
            const std::uint64_t n = rng.between(1, 2000);
            const std::uint64_t rho = rng.between(1, (n + 1) / 2);
            const RunProfile p = random_profile(n, rho, seed);
            const auto ref = reference_merge_sequence(p, v);
            const auto got = merge_sequence(simulate(p, v));
            REQUIRE(ref == got);
        }
    }
}

TEST_CASE("string conversions")
{
    CHECK(parse_variant("patched") == PolicyVariant::Patched);
    CHECK(parse_variant("java") == PolicyVariant::Unpatched);
    CHECK_FALSE(parse_variant("other").has_value());
    for (EventKind k : {EventKind::Push, EventKind::Merge2, EventKind::Merge3, EventKind::Merge4, EventKind::Merge5,
                        EventKind::Force, EventKind::Overflow})
        CHECK(parse_event_kind(to_string(k)) == k);
    CHECK_FALSE(parse_event_kind("M6").has_value());
}
