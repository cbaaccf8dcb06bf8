#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "subsetlab/errors.hpp"
#include "subsetlab/input_set.hpp"

namespace subsetlab {

using EventId = std::uint32_t;
using StepIndex = std::uint32_t;

/// Symbolic families stay symbolic; expanding one materializes up to
/// 2^prefix - 2 masks, so the prefix is capped.
inline constexpr int kMaxFamilyPrefix = 16;

enum class EventKind { Checked, Collateral };

inline std::string_view to_string(EventKind k) {
    return k == EventKind::Checked ? "checked" : "collateral";
}

/// A set-of-subsets subject. PrefixExceptSingleton{p} denotes every nonempty
/// subset drawn from the first p elements except the singleton {x_p}, the
/// shape the row-by-row solver determines wholesale. Small ad-hoc families can
/// be spelled out explicitly.
struct FamilyDescriptor {
    enum class Kind { PrefixExceptSingleton, ExplicitList };

    Kind kind = Kind::PrefixExceptSingleton;
    int prefix = 0;
    std::vector<SubsetMask> members;

    static FamilyDescriptor prefix_except_singleton(int prefix) {
        if (prefix < 2) {
            throw std::invalid_argument("prefix family requires prefix >= 2");
        }
        FamilyDescriptor d;
        d.kind = Kind::PrefixExceptSingleton;
        d.prefix = prefix;
        return d;
    }

    static FamilyDescriptor explicit_list(std::vector<SubsetMask> members) {
        FamilyDescriptor d;
        d.kind = Kind::ExplicitList;
        d.members = std::move(members);
        return d;
    }

    friend bool operator==(const FamilyDescriptor&, const FamilyDescriptor&) = default;
};

/// What one determination event is about. Identity (node_id) is distinct from
/// subset equality: two nodes may denote equal subsets yet be different nodes,
/// which is exactly what the dependency rules care about. Emission assigns
/// node_id = owning event id.
struct SubjectNode {
    std::uint32_t node_id = 0;
    std::variant<SubsetMask, FamilyDescriptor> value;

    bool is_family() const { return std::holds_alternative<FamilyDescriptor>(value); }
    const SubsetMask& mask() const { return std::get<SubsetMask>(value); }
    const FamilyDescriptor& family() const { return std::get<FamilyDescriptor>(value); }

    /// All masks this subject denotes (a single-subset node yields one mask).
    std::vector<SubsetMask> expand(int n) const {
        if (!is_family()) {
            return {mask()};
        }
        const FamilyDescriptor& fam = family();
        if (fam.kind == FamilyDescriptor::Kind::ExplicitList) {
            return fam.members;
        }
        if (fam.prefix > n) {
            throw std::invalid_argument("prefix family exceeds input cardinality");
        }
        if (fam.prefix > kMaxFamilyPrefix) {
            throw capacity_error("prefix family expansion capped at " + std::to_string(kMaxFamilyPrefix));
        }
        const std::uint32_t limit = (std::uint32_t{1} << fam.prefix) - 1;
        const std::uint32_t singleton = std::uint32_t{1} << (fam.prefix - 1);
        std::vector<SubsetMask> masks;
        masks.reserve(limit - 1);
        for (std::uint32_t bits = 1; bits <= limit; ++bits) {
            if (bits != singleton) masks.push_back(SubsetMask{bits});
        }
        return masks;
    }

    friend bool operator==(const SubjectNode&, const SubjectNode&) = default;
};

enum class SolutionKind { IsSolution, NotSolution, FamilyContainsSolution, FamilyContainsNoSolution };

struct SolutionInfo {
    SolutionKind kind = SolutionKind::NotSolution;
    SubsetMask witness{};

    static SolutionInfo solution(SubsetMask witness) { return {SolutionKind::IsSolution, witness}; }
    static SolutionInfo not_solution() { return {SolutionKind::NotSolution, {}}; }
    static SolutionInfo family_with(SubsetMask witness) { return {SolutionKind::FamilyContainsSolution, witness}; }
    static SolutionInfo family_without() { return {SolutionKind::FamilyContainsNoSolution, {}}; }

    bool has_witness() const {
        return kind == SolutionKind::IsSolution || kind == SolutionKind::FamilyContainsSolution;
    }

    friend bool operator==(const SolutionInfo&, const SolutionInfo&) = default;
};

/// One subject being determined. Checked events stand on their own (empty
/// deps); collateral events cite the earlier events they were derived from.
struct DeterminationEvent {
    EventId id = 0;
    StepIndex step = 0;  // 1-based
    EventKind kind = EventKind::Checked;
    SubjectNode subject;
    std::uint32_t place = 0;  // 1-based label among the step's checked events; 0 for collateral
    SolutionInfo solution;
    std::vector<EventId> deps;

    friend bool operator==(const DeterminationEvent&, const DeterminationEvent&) = default;
};

/// Full event log of one run. procedural_steps are steps in which the
/// algorithm worked but determined nothing; steps beyond those with no events
/// are trailing worst-case padding, where nothing happens at all.
struct Trace {
    std::string algorithm;
    InputSet input;
    std::vector<DeterminationEvent> events;
    StepIndex step_count = 0;
    std::vector<StepIndex> procedural_steps;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// The per-step checked-subset counts d = (d_1, ..., d_k), padding included.
struct Distribution {
    std::vector<std::uint32_t> counts;

    std::size_t step_count() const { return counts.size(); }
    std::uint64_t total_checked() const {
        std::uint64_t total = 0;
        for (std::uint32_t c : counts) total += c;
        return total;
    }

    friend bool operator==(const Distribution&, const Distribution&) = default;
    friend auto operator<=>(const Distribution&, const Distribution&) = default;
};

enum class PropertyClass { P1, P2 };

inline std::string_view to_string(PropertyClass p) { return p == PropertyClass::P1 ? "P1" : "P2"; }

inline Distribution extract_distribution(const Trace& t) {
    Distribution d;
    d.counts.assign(t.step_count, 0);
    for (const DeterminationEvent& e : t.events) {
        if (e.step < 1 || e.step > t.step_count) {
            throw std::invalid_argument("event step " + std::to_string(e.step) + " outside 1.." +
                                        std::to_string(t.step_count));
        }
        if (e.kind == EventKind::Checked) {
            ++d.counts[e.step - 1];
        }
    }
    return d;
}

/// P2 iff some step checks more than one subject; exhaustive, exclusive.
inline PropertyClass classify_property(const Distribution& d) {
    for (std::uint32_t c : d.counts) {
        if (c > 1) return PropertyClass::P2;
    }
    return PropertyClass::P1;
}

/// Emission-side discipline for solvers: event ids increase in emission
/// order, node identity equals the owning event id, dependencies must point
/// strictly backwards, and steps that close without events are recorded as
/// procedural. Hand-assembled Trace values can break all of these rules on
/// purpose; the auditors exist to catch that.
class TraceBuilder {
public:
    TraceBuilder(std::string algorithm, InputSet input) : trace_{std::move(algorithm), std::move(input), {}, 0, {}} {}

    StepIndex begin_step() {
        close_step();
        current_step_ = ++trace_.step_count;
        checked_in_step_ = 0;
        step_has_events_ = false;
        return current_step_;
    }

    EventId checked(SubsetMask subject, SolutionInfo solution) {
        SubjectNode node;
        node.value = subject;
        return emit(EventKind::Checked, std::move(node), std::move(solution), {});
    }

    EventId collateral(SubsetMask subject, SolutionInfo solution, std::vector<EventId> deps) {
        SubjectNode node;
        node.value = subject;
        return emit(EventKind::Collateral, std::move(node), std::move(solution), std::move(deps));
    }

    EventId collateral_family(FamilyDescriptor family, SolutionInfo solution, std::vector<EventId> deps) {
        SubjectNode node;
        node.value = std::move(family);
        return emit(EventKind::Collateral, std::move(node), std::move(solution), std::move(deps));
    }

    Trace finish() {
        close_step();
        return std::move(trace_);
    }

private:
    EventId emit(EventKind kind, SubjectNode subject, SolutionInfo solution, std::vector<EventId> deps) {
        if (current_step_ == 0) {
            throw std::logic_error("emit before begin_step");
        }
        if (kind == EventKind::Collateral && deps.empty()) {
            throw std::logic_error("collateral event requires at least one dependency");
        }
        if (kind == EventKind::Checked && !deps.empty()) {
            throw std::logic_error("checked event cannot carry dependencies");
        }
        const EventId id = static_cast<EventId>(trace_.events.size());
        for (EventId dep : deps) {
            if (dep >= id) {
                throw std::logic_error("dependency must reference an earlier event");
            }
        }
        subject.node_id = id;
        DeterminationEvent e;
        e.id = id;
        e.step = current_step_;
        e.kind = kind;
        e.subject = std::move(subject);
        e.place = kind == EventKind::Checked ? ++checked_in_step_ : 0;
        e.solution = std::move(solution);
        e.deps = std::move(deps);
        trace_.events.push_back(std::move(e));
        step_has_events_ = true;
        return id;
    }

    void close_step() {
        if (current_step_ != 0 && !step_has_events_) {
            trace_.procedural_steps.push_back(current_step_);
        }
    }

    Trace trace_;
    StepIndex current_step_ = 0;
    std::uint32_t checked_in_step_ = 0;
    bool step_has_events_ = true;
};

}  // namespace subsetlab
