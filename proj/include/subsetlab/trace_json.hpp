#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "subsetlab/trace.hpp"

namespace subsetlab {

// Trace files are JSON of the shape
//   {algorithm, input:[ints], step_count, procedural_steps:[ints],
//    events:[{id, step, kind, subject, place, solution, deps}]}
// with subjects {"mask":"m:7"} | {"family":{"prefix_except_singleton":i}}
//             | {"family":{"members":["m:1",...]}}
// and solutions {"kind":"is_solution","witness":"m:7"} etc. Node identity is
// implied: the file format equates a subject's identity with its event id.

inline std::string_view solution_kind_name(SolutionKind kind) {
    switch (kind) {
        case SolutionKind::IsSolution: return "is_solution";
        case SolutionKind::NotSolution: return "not_solution";
        case SolutionKind::FamilyContainsSolution: return "family_contains_solution";
        case SolutionKind::FamilyContainsNoSolution: return "family_contains_no_solution";
    }
    return "?";
}

inline nlohmann::json trace_to_json(const Trace& t) {
    nlohmann::json out;
    out["algorithm"] = t.algorithm;
    out["input"] = t.input.elements();
    out["step_count"] = t.step_count;
    out["procedural_steps"] = t.procedural_steps;
    nlohmann::json events = nlohmann::json::array();
    for (const DeterminationEvent& e : t.events) {
        nlohmann::json je;
        je["id"] = e.id;
        je["step"] = e.step;
        je["kind"] = to_string(e.kind);
        if (!e.subject.is_family()) {
            je["subject"] = {{"mask", to_string(e.subject.mask())}};
        } else {
            const FamilyDescriptor& fam = e.subject.family();
            if (fam.kind == FamilyDescriptor::Kind::PrefixExceptSingleton) {
                je["subject"] = {{"family", {{"prefix_except_singleton", fam.prefix}}}};
            } else {
                nlohmann::json members = nlohmann::json::array();
                for (SubsetMask m : fam.members) members.push_back(to_string(m));
                je["subject"] = {{"family", {{"members", members}}}};
            }
        }
        je["place"] = e.place;
        nlohmann::json solution;
        solution["kind"] = solution_kind_name(e.solution.kind);
        if (e.solution.has_witness()) {
            solution["witness"] = to_string(e.solution.witness);
        }
        je["solution"] = solution;
        je["deps"] = e.deps;
        events.push_back(std::move(je));
    }
    out["events"] = std::move(events);
    return out;
}

inline Trace trace_from_json(const nlohmann::json& in) {
    if (!in.is_object()) {
        throw std::invalid_argument("trace JSON must be an object");
    }
    InputSet input(in.at("input").get<std::vector<std::int64_t>>());
    const int n = input.size();
    const std::uint64_t universe = std::uint64_t{1} << n;
    auto checked_mask = [&](std::string_view text) {
        const SubsetMask m = parse_mask(text);
        if (m.bits >= universe) {
            throw std::invalid_argument("mask " + std::string(text) + " lies outside the " + std::to_string(n) +
                                        "-element universe");
        }
        return m;
    };
    Trace t{in.at("algorithm").get<std::string>(), std::move(input), {}, in.at("step_count").get<StepIndex>(),
            in.at("procedural_steps").get<std::vector<StepIndex>>()};
    for (const nlohmann::json& je : in.at("events")) {
        DeterminationEvent e;
        e.id = je.at("id").get<EventId>();
        const std::string kind = je.at("kind").get<std::string>();
        if (kind == "checked") {
            e.kind = EventKind::Checked;
        } else if (kind == "collateral") {
            e.kind = EventKind::Collateral;
        } else {
            throw std::invalid_argument("unknown event kind \"" + kind + "\"");
        }
        e.step = je.at("step").get<StepIndex>();
        const nlohmann::json& subject = je.at("subject");
        if (subject.contains("mask")) {
            e.subject.value = checked_mask(subject.at("mask").get<std::string>());
        } else if (subject.contains("family")) {
            const nlohmann::json& fam = subject.at("family");
            if (fam.contains("prefix_except_singleton")) {
                const int prefix = fam.at("prefix_except_singleton").get<int>();
                if (prefix > n) {
                    throw std::invalid_argument("family prefix " + std::to_string(prefix) +
                                                " exceeds the input cardinality " + std::to_string(n));
                }
                e.subject.value = FamilyDescriptor::prefix_except_singleton(prefix);
            } else if (fam.contains("members")) {
                std::vector<SubsetMask> members;
                for (const nlohmann::json& m : fam.at("members")) {
                    members.push_back(checked_mask(m.get<std::string>()));
                }
                e.subject.value = FamilyDescriptor::explicit_list(std::move(members));
            } else {
                throw std::invalid_argument("unknown family descriptor");
            }
        } else {
            throw std::invalid_argument("event subject must be a mask or a family");
        }
        e.subject.node_id = e.id;
        e.place = je.at("place").get<std::uint32_t>();
        const nlohmann::json& solution = je.at("solution");
        const std::string verdict = solution.at("kind").get<std::string>();
        if (verdict == "is_solution") {
            e.solution = SolutionInfo::solution(checked_mask(solution.at("witness").get<std::string>()));
        } else if (verdict == "not_solution") {
            e.solution = SolutionInfo::not_solution();
        } else if (verdict == "family_contains_solution") {
            e.solution = SolutionInfo::family_with(checked_mask(solution.at("witness").get<std::string>()));
        } else if (verdict == "family_contains_no_solution") {
            e.solution = SolutionInfo::family_without();
        } else {
            throw std::invalid_argument("unknown solution kind \"" + verdict + "\"");
        }
        e.deps = je.at("deps").get<std::vector<EventId>>();
        t.events.push_back(std::move(e));
    }
    return t;
}

inline void write_trace_file(const std::filesystem::path& path, const Trace& t) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << trace_to_json(t).dump(2) << '\n';
}

inline Trace read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    nlohmann::json parsed;
    try {
        in >> parsed;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed trace file " + path.string() + ": " + e.what());
    }
    try {
        return trace_from_json(parsed);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed trace file " + path.string() + ": " + e.what());
    }
}

}  // namespace subsetlab
