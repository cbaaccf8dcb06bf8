#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "subsetlab/errors.hpp"
#include "subsetlab/input_set.hpp"
#include "subsetlab/rng.hpp"
#include "subsetlab/trace.hpp"

namespace subsetlab {

enum class ViolationKind {
    Partition,     // event claims both natures or neither (checked with deps / collateral without)
    Ordering,      // dependency does not strictly precede the event, or is unknown
    Identity,      // dependency subject has the same node identity as the event's subject
    Coverage,      // some nonempty subset is never determined
    SolutionInfo,  // recorded verdict disagrees with the actual subset sums
};

inline std::string_view to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::Partition: return "partition";
        case ViolationKind::Ordering: return "ordering";
        case ViolationKind::Identity: return "identity";
        case ViolationKind::Coverage: return "coverage";
        case ViolationKind::SolutionInfo: return "solution-info";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    std::optional<EventId> event;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const {
        return std::any_of(violations.begin(), violations.end(),
                           [kind](const Violation& v) { return v.kind == kind; });
    }
};

namespace detail {

inline std::unordered_map<EventId, std::size_t> index_events(const Trace& t) {
    std::unordered_map<EventId, std::size_t> by_id;
    by_id.reserve(t.events.size());
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        by_id.emplace(t.events[i].id, i);
    }
    return by_id;
}

/// Marks every mask a subject denotes in a coverage bitmap without
/// materializing prefix families.
inline void mark_coverage(const SubjectNode& subject, std::vector<char>& covered) {
    if (!subject.is_family()) {
        if (subject.mask().bits < covered.size()) covered[subject.mask().bits] = 1;
        return;
    }
    const FamilyDescriptor& fam = subject.family();
    if (fam.kind == FamilyDescriptor::Kind::ExplicitList) {
        for (SubsetMask m : fam.members) {
            if (m.bits < covered.size()) covered[m.bits] = 1;
        }
        return;
    }
    const std::uint32_t limit = (std::uint32_t{1} << fam.prefix) - 1;
    const std::uint32_t singleton = std::uint32_t{1} << (fam.prefix - 1);
    for (std::uint32_t bits = 1; bits <= limit && bits < covered.size(); ++bits) {
        if (bits != singleton) covered[bits] = 1;
    }
}

inline bool family_member(const FamilyDescriptor& fam, SubsetMask m) {
    if (fam.kind == FamilyDescriptor::Kind::ExplicitList) {
        return std::find(fam.members.begin(), fam.members.end(), m) != fam.members.end();
    }
    const std::uint32_t limit = (std::uint32_t{1} << fam.prefix) - 1;
    const std::uint32_t singleton = std::uint32_t{1} << (fam.prefix - 1);
    return m.bits >= 1 && m.bits <= limit && m.bits != singleton;
}

inline bool family_has_solution(const InputSet& s, const FamilyDescriptor& fam) {
    if (fam.kind == FamilyDescriptor::Kind::ExplicitList) {
        return std::any_of(fam.members.begin(), fam.members.end(),
                           [&](SubsetMask m) { return !m.empty() && subset_sum(s, m) == 0; });
    }
    if (fam.prefix > kMaxFamilyPrefix) {
        throw capacity_error("family solution scan capped at prefix " + std::to_string(kMaxFamilyPrefix));
    }
    const std::uint32_t limit = (std::uint32_t{1} << fam.prefix) - 1;
    const std::uint32_t singleton = std::uint32_t{1} << (fam.prefix - 1);
    for (std::uint32_t bits = 1; bits <= limit; ++bits) {
        if (bits != singleton && subset_sum(s, SubsetMask{bits}) == 0) return true;
    }
    return false;
}

}  // namespace detail

/// Audits a trace against the event-log rules: the checked/collateral
/// partition, backwards-only dependencies, the node-identity rule, coverage
/// of all 2^n - 1 subsets, and solution verdicts recomputed from the input.
/// Problems become report entries, never faults.
inline ValidationReport validate_trace(const Trace& t) {
    ValidationReport report;
    const int n = t.input.size();
    const std::uint64_t universe_size = std::uint64_t{1} << n;
    const auto by_id = detail::index_events(t);

    // Subjects outside the input universe cannot be audited further.
    auto subject_in_range = [&](const SubjectNode& subject) {
        if (!subject.is_family()) {
            return std::uint64_t{subject.mask().bits} < universe_size;
        }
        const FamilyDescriptor& fam = subject.family();
        if (fam.kind == FamilyDescriptor::Kind::PrefixExceptSingleton) {
            return fam.prefix <= n;
        }
        return std::all_of(fam.members.begin(), fam.members.end(),
                           [&](SubsetMask m) { return std::uint64_t{m.bits} < universe_size; });
    };

    for (const DeterminationEvent& e : t.events) {
        // (a) every event has exactly one nature
        if (e.kind == EventKind::Checked && !e.deps.empty()) {
            report.violations.push_back({ViolationKind::Partition, e.id, "checked event carries dependencies"});
        }
        if (e.kind == EventKind::Collateral && e.deps.empty()) {
            report.violations.push_back({ViolationKind::Partition, e.id, "collateral event has no dependencies"});
        }

        for (EventId dep : e.deps) {
            // (b) dependencies strictly precede
            auto it = by_id.find(dep);
            if (it == by_id.end()) {
                report.violations.push_back({ViolationKind::Ordering, e.id,
                                             "dependency " + std::to_string(dep) + " does not exist"});
                continue;
            }
            if (dep >= e.id) {
                report.violations.push_back({ViolationKind::Ordering, e.id,
                                             "dependency " + std::to_string(dep) + " does not precede event"});
            }
            // (c) a subject never depends on its own identity
            if (t.events[it->second].subject.node_id == e.subject.node_id) {
                report.violations.push_back({ViolationKind::Identity, e.id,
                                             "dependency " + std::to_string(dep) +
                                                 " has the same node identity as the event subject"});
            }
        }

        // (e) recorded verdicts vs. recomputed sums
        if (!subject_in_range(e.subject) ||
            (e.solution.has_witness() && std::uint64_t{e.solution.witness.bits} >= universe_size)) {
            report.violations.push_back(
                {ViolationKind::SolutionInfo, e.id, "subject or witness lies outside the input universe"});
            continue;
        }
        if (!e.subject.is_family()) {
            const SubsetMask m = e.subject.mask();
            switch (e.solution.kind) {
                case SolutionKind::IsSolution:
                    if (m.empty() || subset_sum(t.input, m) != 0 || e.solution.witness != m) {
                        report.violations.push_back({ViolationKind::SolutionInfo, e.id,
                                                     "subject " + to_string(m) + " marked a solution incorrectly"});
                    }
                    break;
                case SolutionKind::NotSolution:
                    if (!m.empty() && subset_sum(t.input, m) == 0) {
                        report.violations.push_back({ViolationKind::SolutionInfo, e.id,
                                                     "subject " + to_string(m) + " is a solution but marked otherwise"});
                    }
                    break;
                default:
                    report.violations.push_back(
                        {ViolationKind::SolutionInfo, e.id, "family verdict attached to a single-subset subject"});
            }
        } else {
            const FamilyDescriptor& fam = e.subject.family();
            switch (e.solution.kind) {
                case SolutionKind::FamilyContainsSolution: {
                    const SubsetMask w = e.solution.witness;
                    if (w.empty() || !detail::family_member(fam, w) || subset_sum(t.input, w) != 0) {
                        report.violations.push_back(
                            {ViolationKind::SolutionInfo, e.id, "family witness " + to_string(w) + " is not valid"});
                    }
                    break;
                }
                case SolutionKind::FamilyContainsNoSolution:
                    if (detail::family_has_solution(t.input, fam)) {
                        report.violations.push_back(
                            {ViolationKind::SolutionInfo, e.id, "family contains a solution but marked otherwise"});
                    }
                    break;
                default:
                    report.violations.push_back(
                        {ViolationKind::SolutionInfo, e.id, "single-subset verdict attached to a family subject"});
            }
        }
    }

    // (d) every nonempty subset determined at least once
    const std::size_t universe = std::size_t{1} << n;
    std::vector<char> covered(universe, 0);
    for (const DeterminationEvent& e : t.events) {
        detail::mark_coverage(e.subject, covered);
    }
    std::uint64_t missing = 0;
    std::optional<std::uint32_t> first_missing;
    for (std::uint32_t bits = 1; bits < universe; ++bits) {
        if (!covered[bits]) {
            ++missing;
            if (!first_missing) first_missing = bits;
        }
    }
    if (missing) {
        report.violations.push_back({ViolationKind::Coverage, std::nullopt,
                                     std::to_string(missing) + " subsets never determined, first " +
                                         to_string(SubsetMask{*first_missing})});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

struct ChainNode {
    EventId event;
    std::uint32_t node_id;
    EventKind kind;

    friend bool operator==(const ChainNode&, const ChainNode&) = default;
};

/// A dependency path from a checked starting node down to its target. The
/// degenerate chain of a checked target has a single node and length 0.
struct Chain {
    std::vector<ChainNode> nodes;

    std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

/// All maximal dependency paths ending at `target`, one per way of walking
/// the dependency lists back to an event with no dependencies. Throws
/// chain_cycle_error when the walk revisits an event, which witnesses an
/// unbounded chain.
inline std::vector<Chain> build_chains(const Trace& t, EventId target) {
    // Emitted traces index events by their own id; fall back to a scan for
    // hand-assembled ones.
    auto locate = [&t](EventId id) -> std::size_t {
        if (id < t.events.size() && t.events[id].id == id) {
            return static_cast<std::size_t>(id);
        }
        for (std::size_t k = 0; k < t.events.size(); ++k) {
            if (t.events[k].id == id) return k;
        }
        throw std::invalid_argument("event " + std::to_string(id) + " not present in trace");
    };
    const std::size_t target_index = locate(target);

    std::vector<Chain> chains;
    std::vector<std::size_t> path;  // event indices, target-first, reversed on output
    std::vector<char> on_path(t.events.size(), 0);

    auto walk = [&](auto&& self, std::size_t index) -> void {
        if (on_path[index]) {
            throw chain_cycle_error("dependency cycle through event " + std::to_string(t.events[index].id));
        }
        on_path[index] = 1;
        path.push_back(index);
        const DeterminationEvent& e = t.events[index];
        if (e.deps.empty()) {
            Chain chain;
            chain.nodes.reserve(path.size());
            for (auto it = path.rbegin(); it != path.rend(); ++it) {
                const DeterminationEvent& node = t.events[*it];
                chain.nodes.push_back({node.id, node.subject.node_id, node.kind});
            }
            chains.push_back(std::move(chain));
        } else {
            for (EventId dep : e.deps) {
                self(self, locate(dep));
            }
        }
        path.pop_back();
        on_path[index] = 0;
    };
    walk(walk, target_index);
    return chains;
}

enum class ChainViolationKind {
    StartNotChecked,
    InteriorNotCollateral,
    AdjacentIdentity,
    RepeatedNode,
    LengthBound,
};

inline std::string_view to_string(ChainViolationKind k) {
    switch (k) {
        case ChainViolationKind::StartNotChecked: return "start-not-checked";
        case ChainViolationKind::InteriorNotCollateral: return "interior-not-collateral";
        case ChainViolationKind::AdjacentIdentity: return "adjacent-identity";
        case ChainViolationKind::RepeatedNode: return "repeated-node";
        case ChainViolationKind::LengthBound: return "length-bound";
    }
    return "?";
}

struct ChainViolation {
    ChainViolationKind kind;
    std::string detail;
};

struct ChainReport {
    std::vector<ChainViolation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ChainViolationKind kind) const {
        return std::any_of(violations.begin(), violations.end(),
                           [kind](const ChainViolation& v) { return v.kind == kind; });
    }
};

/// Checks a chain against the structural rules: it starts at a checked node,
/// continues through collateral ones, never repeats a node identity, and its
/// length stays under the pigeonhole bound 2^n - 1.
inline ChainReport validate_chain(const Chain& c, int n) {
    ChainReport report;
    if (c.nodes.empty()) {
        report.violations.push_back({ChainViolationKind::StartNotChecked, "chain has no nodes"});
        return report;
    }
    if (c.nodes.front().kind != EventKind::Checked) {
        report.violations.push_back({ChainViolationKind::StartNotChecked, "start node is not checked"});
    }
    for (std::size_t i = 1; i < c.nodes.size(); ++i) {
        if (c.nodes[i].kind != EventKind::Collateral) {
            report.violations.push_back({ChainViolationKind::InteriorNotCollateral,
                                         "node " + std::to_string(i) + " past the start is not collateral"});
        }
        if (c.nodes[i].node_id == c.nodes[i - 1].node_id) {
            report.violations.push_back(
                {ChainViolationKind::AdjacentIdentity, "adjacent nodes share identity " + std::to_string(c.nodes[i].node_id)});
        }
    }
    std::vector<std::uint32_t> ids;
    ids.reserve(c.nodes.size());
    for (const ChainNode& node : c.nodes) ids.push_back(node.node_id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        report.violations.push_back({ChainViolationKind::RepeatedNode, "a node identity appears twice"});
    }
    const std::uint64_t bound = (std::uint64_t{1} << n) - 1;
    if (c.length() > bound) {
        report.violations.push_back({ChainViolationKind::LengthBound,
                                     "length " + std::to_string(c.length()) + " exceeds bound " + std::to_string(bound)});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Mock two-per-step traces
// ---------------------------------------------------------------------------

/// Builds a well-formed trace that checks subsets two per step in a seeded
/// random order. No real solver works this way; the output exists so the
/// classifiers have a P2 specimen to tell apart from solver traces.
inline Trace synthesize_p2_trace(const InputSet& s, std::uint64_t seed) {
    if (s.size() < 2) {
        throw std::invalid_argument("cannot pair subsets with a single-element input");
    }
    std::vector<SubsetMask> masks = enumerate_masks(s.size());
    std::mt19937_64 engine = seeded_engine(seed);
    deterministic_shuffle(masks, engine);

    TraceBuilder builder("p2-mock", s);
    for (std::size_t i = 0; i < masks.size(); i += 2) {
        builder.begin_step();
        for (std::size_t j = i; j < std::min(i + 2, masks.size()); ++j) {
            const SubsetMask m = masks[j];
            builder.checked(m, subset_sum(s, m) == 0 ? SolutionInfo::solution(m) : SolutionInfo::not_solution());
        }
    }
    return builder.finish();
}

}  // namespace subsetlab
