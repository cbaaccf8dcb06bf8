#include <catch2/catch_amalgamated.hpp>

#include "subsetlab/solvers.hpp"
#include "subsetlab/trace_analysis.hpp"

using namespace subsetlab;

namespace {

DeterminationEvent make_event(EventId id, StepIndex step, EventKind kind, SubsetMask mask, SolutionInfo solution,
                              std::vector<EventId> deps = {}) {
    DeterminationEvent e;
    e.id = id;
    e.step = step;
    e.kind = kind;
    e.subject.node_id = id;
    e.subject.value = mask;
    e.place = kind == EventKind::Checked ? 1 : 0;
    e.solution = std::move(solution);
    e.deps = std::move(deps);
    return e;
}

/// A fully valid hand trace over {1, -1}: both singletons checked, the pair
/// derived from the second.
Trace valid_fixture() {
    Trace t{"fixture", InputSet({1, -1}), {}, 3, {}};
    t.events.push_back(make_event(0, 1, EventKind::Checked, SubsetMask{0b01}, SolutionInfo::not_solution()));
    t.events.push_back(make_event(1, 2, EventKind::Checked, SubsetMask{0b10}, SolutionInfo::not_solution()));
    t.events.push_back(make_event(2, 3, EventKind::Collateral, SubsetMask{0b11},
                                  SolutionInfo::solution(SubsetMask{0b11}), {1}));
    return t;
}

}  // namespace

TEST_CASE("a well-formed hand trace passes every audit") {
    REQUIRE(validate_trace(valid_fixture()).ok());
}

TEST_CASE("forward dependencies are ordering violations") {
    Trace t = valid_fixture();
    t.events[2].deps = {5};
    REQUIRE(validate_trace(t).has(ViolationKind::Ordering));

    Trace forward = valid_fixture();
    forward.events[0].kind = EventKind::Collateral;
    forward.events[0].place = 0;
    forward.events[0].deps = {2};  // cites an event that comes later
    const ValidationReport report = validate_trace(forward);
    REQUIRE(report.has(ViolationKind::Ordering));
    REQUIRE_FALSE(report.has(ViolationKind::Coverage));
}

TEST_CASE("missing subsets are coverage violations") {
    Trace t = valid_fixture();
    t.events.pop_back();  // {1,-1} never determined
    const ValidationReport report = validate_trace(t);
    REQUIRE(report.has(ViolationKind::Coverage));
    REQUIRE_FALSE(report.has(ViolationKind::Ordering));
}

TEST_CASE("self-identical dependencies are identity violations") {
    Trace t = valid_fixture();
    // the collateral event's subject claims the same node identity as its
    // dependency's subject: r and its dependency are the same node
    t.events[2].subject.node_id = t.events[1].subject.node_id;
    const ValidationReport report = validate_trace(t);
    REQUIRE(report.has(ViolationKind::Identity));
    REQUIRE_FALSE(report.has(ViolationKind::Ordering));

    // depending on oneself trips both the identity and the ordering audit
    Trace self = valid_fixture();
    self.events[2].deps = {2};
    const ValidationReport self_report = validate_trace(self);
    REQUIRE(self_report.has(ViolationKind::Identity));
    REQUIRE(self_report.has(ViolationKind::Ordering));
}

TEST_CASE("nature mismatches are partition violations") {
    Trace checked_with_deps = valid_fixture();
    checked_with_deps.events[2].kind = EventKind::Checked;
    REQUIRE(validate_trace(checked_with_deps).has(ViolationKind::Partition));

    Trace collateral_without = valid_fixture();
    collateral_without.events[2].deps.clear();
    REQUIRE(validate_trace(collateral_without).has(ViolationKind::Partition));
}

TEST_CASE("wrong verdicts are solution-info violations") {
    Trace lies = valid_fixture();
    lies.events[2].solution = SolutionInfo::not_solution();  // {1,-1} does sum to zero
    REQUIRE(validate_trace(lies).has(ViolationKind::SolutionInfo));

    Trace wrong_witness = valid_fixture();
    wrong_witness.events[2].solution = SolutionInfo::solution(SubsetMask{0b01});
    REQUIRE(validate_trace(wrong_witness).has(ViolationKind::SolutionInfo));
}

TEST_CASE("family verdicts are audited against expansion") {
    Trace t{"fixture", InputSet({1, -1}), {}, 2, {}};
    t.events.push_back(make_event(0, 1, EventKind::Checked, SubsetMask{0b01}, SolutionInfo::not_solution()));
    t.events.push_back(make_event(1, 2, EventKind::Checked, SubsetMask{0b10}, SolutionInfo::not_solution()));
    DeterminationEvent fam;
    fam.id = 2;
    fam.step = 2;
    fam.kind = EventKind::Collateral;
    fam.subject.node_id = 2;
    fam.subject.value = FamilyDescriptor::prefix_except_singleton(2);
    fam.solution = SolutionInfo::family_without();  // wrong: {1,-1} is in the family and sums to zero
    fam.deps = {0};
    t.events.push_back(fam);
    REQUIRE(validate_trace(t).has(ViolationKind::SolutionInfo));

    t.events[2].solution = SolutionInfo::family_with(SubsetMask{0b11});
    REQUIRE(validate_trace(t).ok());

    t.events[2].solution = SolutionInfo::family_with(SubsetMask{0b10});  // witness is the excluded singleton
    REQUIRE(validate_trace(t).has(ViolationKind::SolutionInfo));
}

TEST_CASE("chains of a checked target degenerate to length zero") {
    const Trace t = solve_brute_force(InputSet({1, 2}));
    const auto chains = build_chains(t, 0);
    REQUIRE(chains.size() == 1);
    REQUIRE(chains[0].length() == 0);
    REQUIRE(chains[0].nodes.front().kind == EventKind::Checked);
    REQUIRE(validate_chain(chains[0], 2).ok());
}

TEST_CASE("split-solver sweeps yield length-one chains") {
    const Trace t = solve_horowitz_sahni(InputSet({1, 2, -3, 5}));
    for (const DeterminationEvent& e : t.events) {
        if (e.kind != EventKind::Collateral) continue;
        const auto chains = build_chains(t, e.id);
        REQUIRE(chains.size() == 1);
        REQUIRE(chains[0].length() == 1);
        REQUIRE(validate_chain(chains[0], 4).ok());
    }
}

TEST_CASE("unknown targets are rejected") {
    const Trace t = solve_brute_force(InputSet({1, 2}));
    REQUIRE_THROWS_AS(build_chains(t, 99), std::invalid_argument);
}

TEST_CASE("cycles are reported as unbounded-chain witnesses") {
    Trace t = valid_fixture();
    // rewire events 1 and 2 into a two-cycle; ids stay in range so only the
    // walk itself can notice
    t.events[1].kind = EventKind::Collateral;
    t.events[1].place = 0;
    t.events[1].deps = {2};
    REQUIRE_THROWS_AS(build_chains(t, 2), chain_cycle_error);
}

TEST_CASE("chain validation catches structural defects") {
    Chain collateral_start;
    collateral_start.nodes = {{0, 0, EventKind::Collateral}, {1, 1, EventKind::Collateral}};
    REQUIRE(validate_chain(collateral_start, 3).has(ChainViolationKind::StartNotChecked));

    Chain checked_interior;
    checked_interior.nodes = {{0, 0, EventKind::Checked}, {1, 1, EventKind::Checked}};
    REQUIRE(validate_chain(checked_interior, 3).has(ChainViolationKind::InteriorNotCollateral));

    Chain adjacent;
    adjacent.nodes = {{0, 0, EventKind::Checked}, {1, 0, EventKind::Collateral}};
    const ChainReport adjacent_report = validate_chain(adjacent, 3);
    REQUIRE(adjacent_report.has(ChainViolationKind::AdjacentIdentity));
    REQUIRE(adjacent_report.has(ChainViolationKind::RepeatedNode));

    Chain repeated;
    repeated.nodes = {{0, 0, EventKind::Checked},
                      {1, 1, EventKind::Collateral},
                      {2, 0, EventKind::Collateral}};
    const ChainReport repeated_report = validate_chain(repeated, 3);
    REQUIRE(repeated_report.has(ChainViolationKind::RepeatedNode));
    REQUIRE_FALSE(repeated_report.has(ChainViolationKind::AdjacentIdentity));

    // with one element the bound 2^1 - 1 = 1 caps chain length
    Chain long_chain;
    long_chain.nodes = {{0, 0, EventKind::Checked},
                        {1, 1, EventKind::Collateral},
                        {2, 2, EventKind::Collateral}};
    REQUIRE(validate_chain(long_chain, 1).has(ChainViolationKind::LengthBound));
    REQUIRE(validate_chain(long_chain, 4).ok());

    Chain empty;
    REQUIRE_FALSE(validate_chain(empty, 3).ok());
}
