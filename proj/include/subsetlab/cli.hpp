#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subsetlab/box_process.hpp"
#include "subsetlab/errors.hpp"
#include "subsetlab/input_search.hpp"
#include "subsetlab/solvers.hpp"
#include "subsetlab/trace_analysis.hpp"
#include "subsetlab/trace_json.hpp"

namespace subsetlab::cli {

// Exit codes: 0 success, 1 a trace-rule violation was found (or witnessed as
// a cycle), 2 operator error, 3 a cap or search budget ran out.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitExhausted = 3;

namespace detail {

inline AlgorithmId algorithm_from_flag(const std::string& name) {
    if (auto alg = parse_algorithm(name)) return *alg;
    throw CLI::ValidationError("--alg", "unknown algorithm \"" + name + "\" (expected brute, hs, or dp)");
}

inline FamilyRule family_from_flag(const std::string& name) {
    if (name == "const") return FamilyRule::constant();
    if (name == "paper-f") return FamilyRule::swap_at_one();
    if (name.rfind("jump:", 0) == 0) return FamilyRule::swap_at(Rational::parse(name.substr(5)));
    throw CLI::ValidationError("--family", "unknown family \"" + name + "\" (expected const, paper-f, or jump:<a/b>)");
}

/// Default seed is 0; SUBSETLAB_SEED overrides the default, an explicit
/// --seed flag overrides both.
inline std::uint64_t effective_seed(const CLI::App* cmd, std::uint64_t flag_value) {
    if (cmd->count("--seed") > 0) return flag_value;
    if (const char* env = std::getenv("SUBSETLAB_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return flag_value;
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) {
        throw std::invalid_argument("cannot open " + out_path + " for writing");
    }
    file << text;
}

inline std::map<std::uint32_t, std::int64_t> parse_counts(const std::string& text) {
    std::map<std::uint32_t, std::int64_t> counts;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("counts must look like \"0:1,1:2\", got \"" + token + "\"");
        }
        counts[static_cast<std::uint32_t>(std::stoul(token.substr(0, colon)))] =
            std::stoll(token.substr(colon + 1));
    }
    if (counts.empty()) {
        throw std::invalid_argument("empty counts list");
    }
    return counts;
}

inline nlohmann::json report_to_json(const ValidationReport& report) {
    nlohmann::json violations = nlohmann::json::array();
    for (const Violation& v : report.violations) {
        nlohmann::json jv;
        jv["kind"] = std::string(to_string(v.kind));
        if (v.event) jv["event"] = *v.event;
        jv["detail"] = v.detail;
        violations.push_back(std::move(jv));
    }
    return violations;
}

inline nlohmann::json solve_summary(const Trace& trace) {
    const Distribution d = extract_distribution(trace);
    std::uint64_t collateral = 0;
    for (const DeterminationEvent& e : trace.events) {
        if (e.kind == EventKind::Collateral) ++collateral;
    }
    nlohmann::json out;
    out["algorithm"] = trace.algorithm;
    out["input"] = trace.input.elements();
    const auto witness = find_solution_witness(trace);
    out["has_solution"] = witness.has_value();
    if (witness) {
        out["witness"] = to_string(*witness);
        std::vector<std::int64_t> elements;
        for (int i = 0; i < trace.input.size(); ++i) {
            if (witness->has_element(i)) elements.push_back(trace.input.element(i));
        }
        out["witness_elements"] = elements;
    } else {
        out["witness"] = nullptr;
    }
    out["step_count"] = trace.step_count;
    out["checked_events"] = d.total_checked();
    out["collateral_events"] = collateral;
    out["property"] = std::string(to_string(classify_property(d)));
    return out;
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"subset-sum solver laboratory", "subsetlab"};
    app.require_subcommand(1);

    std::string alg_name = "brute";
    std::string set_text;
    std::string trace_path;
    std::string out_path;
    std::string family_name = "const";
    std::string counts_text;
    std::string q0_text = "1/1";
    std::string format = "csv";
    std::uint64_t seed = 0;
    std::uint64_t trials = 100000;
    std::uint64_t budget = 10000;
    std::int64_t value_bound = 50;
    int n = 4;
    int max_denominator = 16;
    int depth = 64;
    std::uint32_t places = 0;
    StepIndex step = 1;
    EventId event_id = 0;

    CLI::App* solve = app.add_subcommand("solve", "run a solver and print witness plus trace summary");
    solve->add_option("--alg", alg_name, "algorithm: brute, hs, dp")->required();
    solve->add_option("--set", set_text, "comma-separated integers, e.g. 1,-3,2")->required();
    solve->add_option("--out", out_path, "write JSON here instead of stdout");

    CLI::App* trace_cmd = app.add_subcommand("trace", "run a solver and emit the full trace JSON");
    trace_cmd->add_option("--alg", alg_name, "algorithm: brute, hs, dp")->required();
    trace_cmd->add_option("--set", set_text, "comma-separated integers")->required();
    trace_cmd->add_option("--out", out_path, "write trace JSON here instead of stdout");

    CLI::App* analyze = app.add_subcommand("analyze", "validate a trace file and classify its distribution");
    analyze->add_option("trace", trace_path, "trace JSON file")->required();

    CLI::App* chains_cmd = app.add_subcommand("chains", "dependency chains ending at one event");
    chains_cmd->add_option("trace", trace_path, "trace JSON file")->required();
    chains_cmd->add_option("--event", event_id, "target event id")->required();

    CLI::App* find_st = app.add_subcommand("find-st", "search for same-class inputs split by one step");
    find_st->add_option("--alg", alg_name, "algorithm: brute, hs, dp")->required();
    find_st->add_option("--n", n, "input cardinality")->required();
    find_st->add_option("--bound", value_bound, "element magnitude bound M")->required();
    find_st->add_option("--step", step, "1-based step index")->required();
    find_st->add_option("--budget", budget, "max candidate inputs to try");
    find_st->add_option("--seed", seed, "sampling seed");
    find_st->add_option("--out", out_path, "write JSON here instead of stdout");

    CLI::App* box_cmd = app.add_subcommand("box", "exact probabilities of an outcome box");
    box_cmd->add_option("--counts", counts_text, "place:count list, e.g. 0:1,1:1")->required();
    box_cmd->add_option("--places", places, "place capacity (default: largest listed place)");
    box_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

    CLI::App* box_sim = app.add_subcommand("box-sim", "Monte Carlo frequencies of an outcome box");
    box_sim->add_option("--counts", counts_text, "place:count list")->required();
    box_sim->add_option("--trials", trials, "number of draws");
    box_sim->add_option("--seed", seed, "stream seed");
    box_sim->add_option("--places", places, "place capacity (default: largest listed place)");
    box_sim->add_option("--out", out_path, "write JSON here instead of stdout");

    CLI::App* family_scan = app.add_subcommand("family-scan", "exact place probabilities over a rational grid");
    family_scan->add_option("--family", family_name, "const, paper-f, or jump:<a/b>")->required();
    family_scan->add_option("--max-den", max_denominator, "grid = all reduced fractions with denominator <= this");
    family_scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    family_scan->add_option("--out", out_path, "write here instead of stdout");

    CLI::App* jump = app.add_subcommand("jump", "probe a family for a jump at q0 from below");
    jump->add_option("--family", family_name, "const, paper-f, or jump:<a/b>")->required();
    jump->add_option("--q0", q0_text, "point to probe, as a/b")->required();
    jump->add_option("--depth", depth, "approach sequence length");
    jump->add_option("--out", out_path, "write JSON here instead of stdout");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));

        if (solve->parsed() || trace_cmd->parsed()) {
            const AlgorithmId alg = detail::algorithm_from_flag(alg_name);
            const Trace trace = run_solver(alg, InputSet::parse(set_text));
            if (solve->parsed()) {
                detail::emit(detail::solve_summary(trace).dump(2) + "\n", out_path, out);
            } else {
                detail::emit(trace_to_json(trace).dump(2) + "\n", out_path, out);
            }
            return kExitOk;
        }

        if (analyze->parsed()) {
            const Trace trace = read_trace_file(trace_path);
            const ValidationReport report = validate_trace(trace);
            const Distribution d = extract_distribution(trace);
            nlohmann::json summary;
            summary["algorithm"] = trace.algorithm;
            summary["distribution"] = d.counts;
            summary["property"] = std::string(to_string(classify_property(d)));
            summary["valid"] = report.ok();
            summary["violations"] = detail::report_to_json(report);
            detail::emit(summary.dump(2) + "\n", out_path, out);
            return report.ok() ? kExitOk : kExitViolation;
        }

        if (chains_cmd->parsed()) {
            const Trace trace = read_trace_file(trace_path);
            const std::vector<Chain> chains = build_chains(trace, event_id);
            nlohmann::json out_chains = nlohmann::json::array();
            for (const Chain& chain : chains) {
                nlohmann::json nodes = nlohmann::json::array();
                for (const ChainNode& node : chain.nodes) {
                    nodes.push_back({{"event", node.event}, {"kind", std::string(to_string(node.kind))}});
                }
                out_chains.push_back({{"length", chain.length()}, {"nodes", std::move(nodes)}});
            }
            detail::emit(out_chains.dump(2) + "\n", out_path, out);
            return kExitOk;
        }

        if (find_st->parsed()) {
            const AlgorithmId alg = detail::algorithm_from_flag(alg_name);
            const STPair pair =
                find_st_pair(alg, n, value_bound, step, budget, detail::effective_seed(find_st, seed));
            detail::emit(st_pair_to_json(pair).dump(2) + "\n", out_path, out);
            return kExitOk;
        }

        if (box_cmd->parsed() || box_sim->parsed()) {
            const CLI::App* cmd = box_cmd->parsed() ? box_cmd : box_sim;
            auto counts = detail::parse_counts(counts_text);
            std::uint32_t capacity = places;
            if (cmd->count("--places") == 0) {
                capacity = counts.rbegin()->first;
            }
            const Box box = make_box(counts, std::max<std::uint32_t>(capacity, 1));
            if (box_cmd->parsed()) {
                const Pmf pmf = exact_pmf(box);
                nlohmann::json summary;
                summary["cardinality"] = box.cardinality();
                summary["places"] = box.place_capacity();
                summary["p_solution"] = solution_probability(box).str();
                nlohmann::json jpmf;
                for (std::uint32_t place = 0; place <= box.place_capacity(); ++place) {
                    jpmf[std::to_string(place)] = pmf.at(place).str();
                }
                summary["pmf"] = std::move(jpmf);
                detail::emit(summary.dump(2) + "\n", out_path, out);
            } else {
                // block-partitioned streams make the parallel totals equal the
                // sequential ones, so the output does not depend on the worker count
                const int workers =
                    static_cast<int>(std::max(1u, std::min(4u, std::thread::hardware_concurrency())));
                const EmpiricalPmf estimate =
                    estimate_pmf_parallel(box, trials, detail::effective_seed(box_sim, seed), workers);
                nlohmann::json frequencies;
                for (std::uint32_t place = 0; place <= box.place_capacity(); ++place) {
                    frequencies[std::to_string(place)] = estimate.frequency(place);
                }
                detail::emit(frequencies.dump(2) + "\n", out_path, out);
            }
            return kExitOk;
        }

        if (family_scan->parsed()) {
            const FamilyRule rule = detail::family_from_flag(family_name);
            const std::vector<Rational> grid = rational_grid(max_denominator);
            const std::vector<FamilyScanRow> rows = scan_family(rule, grid);
            if (format == "csv") {
                std::ostringstream csv;
                write_scan_csv(csv, rows);
                detail::emit(csv.str(), out_path, out);
            } else {
                nlohmann::json table = nlohmann::json::array();
                for (const FamilyScanRow& row : rows) {
                    table.push_back({{"q", row.q.str()},
                                     {"pi0", row.pi0.str()},
                                     {"pi1", row.pi1.str()},
                                     {"pi2", row.pi2.str()}});
                }
                detail::emit(table.dump(2) + "\n", out_path, out);
            }
            return kExitOk;
        }

        if (jump->parsed()) {
            const FamilyRule rule = detail::family_from_flag(family_name);
            const Rational q0 = Rational::parse(q0_text);
            const JumpReport report = detect_jump(rule, q0, approach_below(q0, depth));
            nlohmann::json summary;
            summary["q0"] = report.point.str();
            summary["value_at_q0"] = report.value_at_point.str();
            summary["left_limit"] = report.left_limit.str();
            summary["extrapolated"] = report.extrapolated;
            summary["magnitude"] = report.magnitude.str();
            nlohmann::json samples = nlohmann::json::array();
            for (const auto& [q, pi1] : report.samples) {
                samples.push_back({{"q", q.str()}, {"pi1", pi1.str()}});
            }
            summary["samples"] = std::move(samples);
            detail::emit(summary.dump(2) + "\n", out_path, out);
            return kExitOk;
        }

        err << "no subcommand given\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const capacity_error& e) {
        err << "capacity: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const search_exhausted_error& e) {
        err << "search exhausted: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const chain_cycle_error& e) {
        err << "cycle: " << e.what() << "\n";
        return kExitViolation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace subsetlab::cli
