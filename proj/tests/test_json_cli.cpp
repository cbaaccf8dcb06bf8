#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "subsetlab/cli.hpp"
#include "subsetlab/input_search.hpp"
#include "subsetlab/solvers.hpp"
#include "subsetlab/trace_json.hpp"

using namespace subsetlab;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("subsetlab_test_" + std::to_string(std::rand()) + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("trace file format is byte-stable") {
    const Trace t = solve_brute_force(InputSet({1, 2}));
    REQUIRE(trace_to_json(t).dump() ==
            "{\"algorithm\":\"brute\","
            "\"events\":["
            "{\"deps\":[],\"id\":0,\"kind\":\"checked\",\"place\":1,\"solution\":{\"kind\":\"not_solution\"},"
            "\"step\":1,\"subject\":{\"mask\":\"m:1\"}},"
            "{\"deps\":[],\"id\":1,\"kind\":\"checked\",\"place\":1,\"solution\":{\"kind\":\"not_solution\"},"
            "\"step\":2,\"subject\":{\"mask\":\"m:2\"}},"
            "{\"deps\":[],\"id\":2,\"kind\":\"checked\",\"place\":1,\"solution\":{\"kind\":\"not_solution\"},"
            "\"step\":3,\"subject\":{\"mask\":\"m:3\"}}],"
            "\"input\":[1,2],"
            "\"procedural_steps\":[],"
            "\"step_count\":3}");
}

TEST_CASE("traces round-trip through JSON") {
    for (const InputSet& s : {InputSet({1, -3, 2}), InputSet({4, -2, 7, -9}), InputSet({0, 3, -3})}) {
        for (AlgorithmId alg :
             {AlgorithmId::BruteForce, AlgorithmId::HorowitzSahni, AlgorithmId::DynamicProgramming}) {
            const Trace t = run_solver(alg, s);
            REQUIRE(trace_from_json(trace_to_json(t)) == t);
        }
    }
}

TEST_CASE("malformed trace JSON is rejected") {
    REQUIRE_THROWS_AS(trace_from_json(nlohmann::json::parse("[]")), std::invalid_argument);
    nlohmann::json bad = trace_to_json(solve_brute_force(InputSet({1, 2})));
    bad["events"][0]["kind"] = "mystery";
    REQUIRE_THROWS_AS(trace_from_json(bad), std::invalid_argument);

    nlohmann::json out_of_range = trace_to_json(solve_brute_force(InputSet({1, 2})));
    out_of_range["events"][0]["subject"]["mask"] = "m:ff";  // beyond the 2-element universe
    REQUIRE_THROWS_AS(trace_from_json(out_of_range), std::invalid_argument);

    nlohmann::json wide_family = trace_to_json(solve_dp(InputSet({1, -1})));
    for (nlohmann::json& je : wide_family["events"]) {
        if (je["subject"].contains("family")) {
            je["subject"]["family"]["prefix_except_singleton"] = 9;
        }
    }
    REQUIRE_THROWS_AS(trace_from_json(wide_family), std::invalid_argument);
}

TEST_CASE("audits flag out-of-universe subjects instead of crashing") {
    Trace t = solve_brute_force(InputSet({1, 2}));
    t.events[0].subject.value = SubsetMask{0xff};
    t.events[0].solution = SolutionInfo::not_solution();
    const ValidationReport report = validate_trace(t);
    REQUIRE(report.has(ViolationKind::SolutionInfo));
    REQUIRE(report.has(ViolationKind::Coverage));  // mask 1 is no longer determined
}

TEST_CASE("solve prints the hand-scanned witness") {
    const CliResult result = run_cli({"solve", "--alg", "hs", "--set", "1,2,-3,5"});
    REQUIRE(result.code == cli::kExitOk);
    const nlohmann::json summary = nlohmann::json::parse(result.out);
    REQUIRE(summary.at("has_solution") == true);
    REQUIRE(summary.at("witness") == "m:7");
    REQUIRE(summary.at("witness_elements").get<std::vector<std::int64_t>>() ==
            std::vector<std::int64_t>{1, 2, -3});
    REQUIRE(summary.at("property") == "P1");
}

TEST_CASE("usage errors exit with code 2") {
    REQUIRE(run_cli({"solve", "--alg", "dp"}).code == cli::kExitUsage);         // missing --set
    REQUIRE(run_cli({"solve", "--alg", "nope", "--set", "1"}).code == cli::kExitUsage);
    REQUIRE(run_cli({"frobnicate"}).code == cli::kExitUsage);
    REQUIRE(run_cli({}).code == cli::kExitUsage);
    REQUIRE(run_cli({"solve", "--alg", "dp", "--set", "1,1"}).code == cli::kExitUsage);
}

TEST_CASE("trace then analyze round-trips for all solvers") {
    TempDir dir;
    for (const std::string alg : {"brute", "hs", "dp"}) {
        const std::string path = (dir.path / (alg + ".json")).string();
        REQUIRE(run_cli({"trace", "--alg", alg, "--set", "1,2,-3,5", "--out", path}).code == cli::kExitOk);
        const CliResult analyzed = run_cli({"analyze", path});
        REQUIRE(analyzed.code == cli::kExitOk);
        const nlohmann::json summary = nlohmann::json::parse(analyzed.out);
        REQUIRE(summary.at("valid") == true);
        REQUIRE(summary.at("property") == "P1");
    }
}

TEST_CASE("analyze flags violating traces with exit 1") {
    TempDir dir;
    Trace broken = solve_brute_force(InputSet({1, 2}));
    broken.events[0].kind = EventKind::Collateral;
    broken.events[0].deps = {2};  // cites a later event
    const std::string path = (dir.path / "broken.json").string();
    write_trace_file(path, broken);

    const CliResult result = run_cli({"analyze", path});
    REQUIRE(result.code == cli::kExitViolation);
    const nlohmann::json summary = nlohmann::json::parse(result.out);
    REQUIRE(summary.at("valid") == false);
    REQUIRE_FALSE(summary.at("violations").empty());
}

TEST_CASE("chains subcommand prints dependency paths") {
    TempDir dir;
    const std::string path = (dir.path / "dp.json").string();
    REQUIRE(run_cli({"trace", "--alg", "dp", "--set", "1,2,3", "--out", path}).code == cli::kExitOk);

    const Trace t = read_trace_file(path);
    EventId family_event = 0;
    for (const DeterminationEvent& e : t.events) {
        if (e.subject.is_family() && e.subject.family().prefix == 3) family_event = e.id;
    }
    const CliResult result = run_cli({"chains", path, "--event", std::to_string(family_event)});
    REQUIRE(result.code == cli::kExitOk);
    const nlohmann::json chains = nlohmann::json::parse(result.out);
    REQUIRE(chains.size() == 2);  // the full chain and the starter
}

TEST_CASE("find-st respects the exit taxonomy") {
    const CliResult found = run_cli({"find-st", "--alg", "brute", "--n", "3", "--bound", "10", "--step", "8",
                                     "--budget", "10000", "--seed", "42"});
    REQUIRE(found.code == cli::kExitOk);
    const nlohmann::json pair = nlohmann::json::parse(found.out);
    REQUIRE(pair.at("step") == 8);

    const CliResult exhausted = run_cli({"find-st", "--alg", "brute", "--n", "3", "--bound", "10", "--step", "8",
                                         "--budget", "0"});
    REQUIRE(exhausted.code == cli::kExitExhausted);
}

TEST_CASE("box subcommands") {
    const CliResult exact = run_cli({"box", "--counts", "0:1,1:1"});
    REQUIRE(exact.code == cli::kExitOk);
    const nlohmann::json summary = nlohmann::json::parse(exact.out);
    REQUIRE(summary.at("p_solution") == "1/2");
    REQUIRE(summary.at("pmf").at("1") == "1/2");

    const CliResult sim = run_cli({"box-sim", "--counts", "0:1,1:1", "--trials", "4096", "--seed", "3"});
    REQUIRE(sim.code == cli::kExitOk);
    const nlohmann::json freq = nlohmann::json::parse(sim.out);
    const double p1 = freq.at("1").get<double>();
    REQUIRE(p1 > 0.4);
    REQUIRE(p1 < 0.6);
}

TEST_CASE("family-scan emits the documented CSV") {
    const CliResult csv = run_cli({"family-scan", "--family", "paper-f", "--max-den", "2", "--format", "csv"});
    REQUIRE(csv.code == cli::kExitOk);
    REQUIRE(csv.out ==
            "q,pi0,pi1,pi2\n"
            "0/1,1/1,0/1,0/1\n"
            "1/2,1/2,1/2,0/1\n"
            "1/1,0/1,0/1,1/1\n");

    const CliResult json_rows = run_cli({"family-scan", "--family", "const", "--max-den", "3", "--format", "json"});
    REQUIRE(json_rows.code == cli::kExitOk);
    const nlohmann::json rows = nlohmann::json::parse(json_rows.out);
    REQUIRE(rows.size() == 5);
    for (const nlohmann::json& row : rows) {
        REQUIRE(row.at("pi1") == row.at("q"));
    }
}

TEST_CASE("SUBSETLAB_SEED overrides the default seed but not an explicit flag") {
    const CliResult baseline = run_cli({"find-st", "--alg", "brute", "--n", "3", "--bound", "10", "--step", "8",
                                        "--budget", "10000", "--seed", "42"});
    REQUIRE(baseline.code == cli::kExitOk);

    setenv("SUBSETLAB_SEED", "42", 1);
    const CliResult via_env = run_cli({"find-st", "--alg", "brute", "--n", "3", "--bound", "10", "--step", "8",
                                       "--budget", "10000"});
    const CliResult flag_wins = run_cli({"find-st", "--alg", "brute", "--n", "3", "--bound", "10", "--step", "8",
                                         "--budget", "10000", "--seed", "42"});
    unsetenv("SUBSETLAB_SEED");

    REQUIRE(via_env.code == cli::kExitOk);
    REQUIRE(via_env.out == baseline.out);
    REQUIRE(flag_wins.out == baseline.out);
}

TEST_CASE("chains on a cyclic trace exits with the violation code") {
    TempDir dir;
    Trace cyclic = solve_brute_force(InputSet({1, 2}));
    cyclic.events[0].kind = EventKind::Collateral;
    cyclic.events[0].deps = {1};
    cyclic.events[1].kind = EventKind::Collateral;
    cyclic.events[1].deps = {0};
    const std::string path = (dir.path / "cyclic.json").string();
    write_trace_file(path, cyclic);

    const CliResult result = run_cli({"chains", path, "--event", "0"});
    REQUIRE(result.code == cli::kExitViolation);
}

TEST_CASE("jump subcommand reports the family-F discontinuity") {
    const CliResult result = run_cli({"jump", "--family", "paper-f", "--q0", "1/1", "--depth", "64"});
    REQUIRE(result.code == cli::kExitOk);
    const nlohmann::json report = nlohmann::json::parse(result.out);
    REQUIRE(report.at("magnitude") == "1/1");
    REQUIRE(report.at("value_at_q0") == "0/1");
    REQUIRE(report.at("left_limit") == "1/1");
}
