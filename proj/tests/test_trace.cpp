#include <catch2/catch_amalgamated.hpp>

#include "subsetlab/trace.hpp"
#include "subsetlab/trace_analysis.hpp"

using namespace subsetlab;

namespace {

Trace two_event_trace() {
    TraceBuilder builder("fixture", InputSet({1, -1}));
    builder.begin_step();
    builder.checked(SubsetMask{0b01}, SolutionInfo::not_solution());
    builder.begin_step();  // a procedural step in between
    builder.begin_step();
    builder.checked(SubsetMask{0b10}, SolutionInfo::not_solution());
    const EventId dep = 1;
    builder.begin_step();
    builder.collateral(SubsetMask{0b11}, SolutionInfo::solution(SubsetMask{0b11}), {dep});
    return builder.finish();
}

}  // namespace

TEST_CASE("builder assigns ids, steps, places and procedural steps") {
    const Trace t = two_event_trace();
    REQUIRE(t.step_count == 4);
    REQUIRE(t.procedural_steps == std::vector<StepIndex>{2});
    REQUIRE(t.events.size() == 3);
    REQUIRE(t.events[0].id == 0);
    REQUIRE(t.events[0].place == 1);
    REQUIRE(t.events[0].subject.node_id == 0);
    REQUIRE(t.events[2].kind == EventKind::Collateral);
    REQUIRE(t.events[2].place == 0);
    REQUIRE(t.events[2].deps == std::vector<EventId>{1});
}

TEST_CASE("builder rejects malformed emissions") {
    TraceBuilder builder("fixture", InputSet({1, 2}));
    REQUIRE_THROWS_AS(builder.checked(SubsetMask{1}, SolutionInfo::not_solution()), std::logic_error);
    builder.begin_step();
    builder.checked(SubsetMask{1}, SolutionInfo::not_solution());
    REQUIRE_THROWS_AS(builder.collateral(SubsetMask{2}, SolutionInfo::not_solution(), {}), std::logic_error);
    REQUIRE_THROWS_AS(builder.collateral(SubsetMask{2}, SolutionInfo::not_solution(), {5}), std::logic_error);
}

TEST_CASE("distribution extraction counts checked events per step") {
    const Trace t = two_event_trace();
    const Distribution d = extract_distribution(t);
    REQUIRE(d.counts == std::vector<std::uint32_t>{1, 0, 1, 0});
    REQUIRE(d.total_checked() == 2);

    Trace padded = t;
    padded.step_count = 6;
    REQUIRE(extract_distribution(padded).counts == std::vector<std::uint32_t>{1, 0, 1, 0, 0, 0});

    Trace empty{"fixture", InputSet({4}), {}, 3, {}};
    REQUIRE(extract_distribution(empty).counts == std::vector<std::uint32_t>{0, 0, 0});
}

TEST_CASE("property classification") {
    REQUIRE(classify_property(Distribution{{1, 0, 1}}) == PropertyClass::P1);
    REQUIRE(classify_property(Distribution{{1, 2, 0}}) == PropertyClass::P2);
    REQUIRE(classify_property(Distribution{{}}) == PropertyClass::P1);
}

TEST_CASE("family subjects expand symbolically") {
    const auto fam = FamilyDescriptor::prefix_except_singleton(3);
    SubjectNode node;
    node.value = fam;
    const auto masks = node.expand(3);
    // every nonempty subset of the first three elements except {x_3}
    REQUIRE(masks == std::vector<SubsetMask>{SubsetMask{1}, SubsetMask{2}, SubsetMask{3}, SubsetMask{5},
                                             SubsetMask{6}, SubsetMask{7}});
    REQUIRE_THROWS_AS(FamilyDescriptor::prefix_except_singleton(1), std::invalid_argument);

    SubjectNode wide;
    wide.value = FamilyDescriptor::prefix_except_singleton(kMaxFamilyPrefix + 1);
    REQUIRE_THROWS_AS(wide.expand(kMaxFamilyPrefix + 2), capacity_error);
}

TEST_CASE("two-per-step mock trace") {
    const InputSet tiny({1, 2});
    const Trace t = synthesize_p2_trace(tiny, 9);
    REQUIRE(extract_distribution(t).counts == std::vector<std::uint32_t>{2, 1});
    REQUIRE(classify_property(extract_distribution(t)) == PropertyClass::P2);
    REQUIRE(validate_trace(t).ok());

    const Trace wider = synthesize_p2_trace(InputSet({1, -3, 2}), 5);
    REQUIRE(extract_distribution(wider).total_checked() == 7);
    REQUIRE(validate_trace(wider).ok());

    // places label the two slots of each step
    for (const DeterminationEvent& e : wider.events) {
        REQUIRE(e.place >= 1);
        REQUIRE(e.place <= 2);
    }

    REQUIRE(synthesize_p2_trace(tiny, 9) == synthesize_p2_trace(tiny, 9));
    REQUIRE_THROWS_AS(synthesize_p2_trace(InputSet({5}), 1), std::invalid_argument);
}
