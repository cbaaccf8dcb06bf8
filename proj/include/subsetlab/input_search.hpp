#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subsetlab/errors.hpp"
#include "subsetlab/input_set.hpp"
#include "subsetlab/rng.hpp"
#include "subsetlab/solvers.hpp"
#include "subsetlab/trace.hpp"

namespace subsetlab {

/// Grouping key: all inputs of one size whose padded trace has the same
/// per-step checked counts under one algorithm. The value bound rides along
/// because the table solver's step count depends on it.
struct InputClassKey {
    AlgorithmId algorithm;
    int n;
    std::int64_t value_bound;
    Distribution distribution;

    friend bool operator==(const InputClassKey&, const InputClassKey&) = default;
    friend bool operator<(const InputClassKey& a, const InputClassKey& b) {
        if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
        if (a.n != b.n) return a.n < b.n;
        if (a.value_bound != b.value_bound) return a.value_bound < b.value_bound;
        return a.distribution.counts < b.distribution.counts;
    }
};

/// Draws input sets with distinct elements in [-M, M], reproducibly from the
/// seed. Rejection keeps the draw order as the element order.
class InputSampler {
public:
    InputSampler(int n, std::int64_t value_bound, std::uint64_t seed)
        : n_(n), bound_(value_bound), engine_(seeded_engine(seed)) {
        if (n < 1) {
            throw std::invalid_argument("sampler requires n >= 1");
        }
        if (value_bound < 0 || 2 * value_bound + 1 < n) {
            throw std::invalid_argument("only " + std::to_string(2 * value_bound + 1) + " distinct values in [-" +
                                        std::to_string(value_bound) + ", " + std::to_string(value_bound) +
                                        "]: cannot draw " + std::to_string(n));
        }
    }

    InputSet next() {
        std::vector<std::int64_t> values;
        values.reserve(static_cast<std::size_t>(n_));
        while (static_cast<int>(values.size()) < n_) {
            const std::int64_t draw =
                static_cast<std::int64_t>(uniform_below(engine_, static_cast<std::uint64_t>(2 * bound_ + 1))) - bound_;
            if (std::find(values.begin(), values.end(), draw) == values.end()) {
                values.push_back(draw);
            }
        }
        return InputSet(std::move(values));
    }

private:
    int n_;
    std::int64_t bound_;
    std::mt19937_64 engine_;
};

inline std::vector<InputSet> sample_input_sets(int n, std::int64_t value_bound, int count, std::uint64_t seed) {
    if (count < 1) {
        throw std::invalid_argument("sample count must be at least 1");
    }
    InputSampler sampler(n, value_bound, seed);
    std::vector<InputSet> sets;
    sets.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        sets.push_back(sampler.next());
    }
    return sets;
}

namespace detail {

/// Runs the solver and pads to the worst case for (algorithm, n [, M]).
inline Trace padded_run(AlgorithmId alg, const InputSet& s, std::optional<std::int64_t> value_bound) {
    Trace t = run_solver(alg, s);
    const std::uint64_t target = worst_case_steps(alg, s.size(), value_bound);
    return pad_trace(std::move(t), static_cast<StepIndex>(target));
}

}  // namespace detail

/// Groups inputs by their recomputed padded distribution. Grouping always
/// reruns the solver; nothing is cached or inferred.
inline std::map<InputClassKey, std::vector<InputSet>> group_by_distribution(
    AlgorithmId alg, const std::vector<InputSet>& inputs, std::optional<std::int64_t> value_bound = {}) {
    std::map<InputClassKey, std::vector<InputSet>> groups;
    if (inputs.empty()) return groups;
    const int n = inputs.front().size();
    for (const InputSet& s : inputs) {
        if (s.size() != n) {
            throw std::invalid_argument("grouping requires inputs of one size");
        }
        if (alg == AlgorithmId::DynamicProgramming && !value_bound) {
            throw std::invalid_argument("grouping table runs requires a value bound");
        }
        Distribution d = extract_distribution(detail::padded_run(alg, s, value_bound));
        InputClassKey key{alg, n, value_bound.value_or(0), std::move(d)};
        groups[key].push_back(s);
    }
    return groups;
}

/// A pair of same-class inputs separated by what happens at one step: the
/// s_input's run checks a subset-solution there, the t_input's run does not.
struct STPair {
    AlgorithmId algorithm;
    int n;
    std::int64_t value_bound;
    StepIndex step;
    std::uint32_t places;  // checked-event count the class distribution puts at the step
    InputSet s_input;
    InputSet t_input;
    Distribution distribution;
};

inline nlohmann::json st_pair_to_json(const STPair& pair) {
    nlohmann::json out;
    out["algorithm"] = algorithm_name(pair.algorithm);
    out["n"] = pair.n;
    out["M"] = pair.value_bound;
    out["step"] = pair.step;
    out["S"] = pair.s_input.elements();
    out["T"] = pair.t_input.elements();
    out["distribution"] = pair.distribution.counts;
    return out;
}

/// Rejection-samples inputs until one class yields both roles at the step:
/// a run checking a subset-solution there and a run checking none. Results
/// are a pure function of the arguments and seed.
inline STPair find_st_pair(AlgorithmId alg, int n, std::int64_t value_bound, StepIndex step, std::uint64_t budget,
                           std::uint64_t seed) {
    if (step < 1) {
        throw std::invalid_argument("step index must be 1-based");
    }
    InputSampler sampler(n, value_bound, seed);
    const std::optional<std::int64_t> bound =
        alg == AlgorithmId::DynamicProgramming ? std::optional<std::int64_t>(value_bound) : std::nullopt;

    struct Roles {
        std::optional<InputSet> s_role;
        std::optional<InputSet> t_role;
    };
    std::map<InputClassKey, Roles> classes;
    std::uint64_t discovered = 0;
    bool step_main_somewhere = false;

    for (std::uint64_t k = 0; k < budget; ++k) {
        const InputSet candidate = sampler.next();
        const Trace trace = detail::padded_run(alg, candidate, bound);
        Distribution d = extract_distribution(trace);
        ++discovered;
        if (step > d.counts.size() || d.counts[step - 1] == 0) {
            continue;  // not a main step under this input's distribution
        }
        step_main_somewhere = true;

        bool checked_solution_at_step = false;
        for (const DeterminationEvent& e : trace.events) {
            if (e.step == step && e.kind == EventKind::Checked && e.solution.kind == SolutionKind::IsSolution) {
                checked_solution_at_step = true;
                break;
            }
        }

        InputClassKey key{alg, n, value_bound, std::move(d)};
        Roles& roles = classes[key];
        if (checked_solution_at_step) {
            if (!roles.s_role) roles.s_role = candidate;
        } else {
            if (!roles.t_role) roles.t_role = candidate;
        }
        if (roles.s_role && roles.t_role) {
            return STPair{.algorithm = alg,
                          .n = n,
                          .value_bound = value_bound,
                          .step = step,
                          .places = key.distribution.counts[step - 1],
                          .s_input = *roles.s_role,
                          .t_input = *roles.t_role,
                          .distribution = key.distribution};
        }
    }

    if (discovered > 0 && !step_main_somewhere) {
        throw not_a_main_step_error("step " + std::to_string(step) + " checks nothing in any discovered class");
    }
    throw search_exhausted_error("no class produced both roles at step " + std::to_string(step) + " within " +
                                 std::to_string(budget) + " samples");
}

}  // namespace subsetlab
