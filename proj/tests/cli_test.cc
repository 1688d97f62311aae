#include "latticeplan/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "latticeplan/config.h"
#include "latticeplan/errors.h"

using namespace latticeplan;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string &text, const std::string &piece) {
    return text.find(piece) != std::string::npos;
}

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / "latticeplan_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(cli_estimate, baseline_and_sensitivity_rows) {
    auto base = run({"estimate"});
    ASSERT_EQ(base.code, kExitOk);
    ASSERT_TRUE(contains(base.out, "14 factories, 7.4 kHz, 2.63M qubits")) << base.out;
    ASSERT_TRUE(contains(base.out, "level-1 bound: 7.7 kHz"));

    auto factories = [](std::vector<std::string> args) {
        args.insert(args.begin(), {"--json", "estimate"});
        auto r = run(args);
        EXPECT_EQ(r.code, kExitOk) << r.err;
        return nlohmann::json::parse(r.out).at("factories_needed").get<int>();
    };
    ASSERT_EQ(factories({}), 14);
    ASSERT_EQ(factories({"--cycle-time", "0.1"}), 2);
    ASSERT_EQ(factories({"--cycle-time", "10"}), 135);
    ASSERT_EQ(factories({"--reaction-time", "1"}), 135);
    ASSERT_EQ(factories({"--reaction-time", "100"}), 2);
    ASSERT_EQ(factories({"--gate-error", "1e-4"}), 7);

    auto threshold = run({"estimate", "--gate-error", "0.011"});
    ASSERT_EQ(threshold.code, kExitError);
    ASSERT_TRUE(contains(threshold.err, "threshold"));
}

TEST(cli_estimate, reports_are_deterministic) {
    ASSERT_EQ(run({"estimate"}).out, run({"estimate"}).out);
    ASSERT_EQ(run({"--json", "schedule", "--mode", "lookup"}).out, run({"--json", "schedule", "--mode", "lookup"}).out);
}

TEST(cli_config, file_values_and_flag_overrides) {
    auto path = scratch("fast.cfg");
    std::ofstream(path) << "# faster hardware\ncycle_time_us = 0.1\nreaction_time_us = 10\n";
    auto from_file = run({"--config", path.string(), "--json", "estimate"});
    ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
    ASSERT_EQ(nlohmann::json::parse(from_file.out).at("factories_needed"), 2);
    auto overridden = run({"--config", path.string(), "--json", "estimate", "--cycle-time", "1"});
    ASSERT_EQ(nlohmann::json::parse(overridden.out).at("factories_needed"), 14);

    std::ofstream(path) << "cycle_time_us = 1\n\nmystery = 4\n";
    auto bad = run({"--config", path.string(), "estimate"});
    ASSERT_EQ(bad.code, kExitUsage);
    ASSERT_TRUE(contains(bad.err, "line 3")) << bad.err;

    auto missing = run({"--config", scratch("absent.cfg").string(), "estimate"});
    ASSERT_EQ(missing.code, kExitError);
}

TEST(cli_config, parser) {
    auto c = parse_config("d1 = 15\n d2=23 # tie\nmode = lookup\nentries = 64\n");
    ASSERT_EQ(c.d1, 15);
    ASSERT_EQ(c.d2, 23);
    ASSERT_EQ(c.mode, "lookup");
    ASSERT_EQ(c.lookup_spec().entries, 64);
    ASSERT_THROW(parse_config("d1 = fifteen\n"), UsageError);
    ASSERT_THROW(parse_config("d1\n"), UsageError);
    RunConfig bad_mode;
    bad_mode.mode = "sideways";
    ASSERT_THROW(bad_mode.validate(), UsageError);
}

TEST(cli_verify, constructions) {
    auto r = run({"verify", "autoccz"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_TRUE(contains(r.out, "PASS autoccz: 8 basis + 20 random inputs")) << r.out;

    auto group = run({"verify", "delayed-choice-cz"});
    ASSERT_EQ(group.code, kExitOk);
    ASSERT_TRUE(contains(group.out, "delayed-choice-cz-apply"));
    ASSERT_TRUE(contains(group.out, "delayed-choice-cz-skip"));

    auto unknown = run({"verify", "no-such"});
    ASSERT_EQ(unknown.code, kExitUsage);

    auto emitted = run({"verify", "all", "--emit"});
    ASSERT_EQ(emitted.code, kExitOk);
    for (const auto *name : {"# delayed-choice-cz-apply", "# fowler-mux-cz-skip", "# autoccz", "# uma", "# adder-8"}) {
        ASSERT_TRUE(contains(emitted.out, name)) << name;
    }
}

TEST(cli_verify, zx_fixture) {
    auto r = run({"verify", "--zx", std::string(LATTICEPLAN_FIXTURES) + "/delayed_choice_cz_apply.json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_TRUE(contains(r.out, "PASS"));
    ASSERT_EQ(run({"verify", "--zx", "/no/such/file.json"}).code, kExitError);
}

TEST(cli_verify, seed_from_environment) {
    setenv("LATTICEPLAN_SEED", "99", 1);
    auto r = run({"verify", "toffoli"});
    setenv("LATTICEPLAN_SEED", "not-a-number", 1);
    auto bad = run({"verify", "toffoli"});
    unsetenv("LATTICEPLAN_SEED");
    ASSERT_EQ(r.code, kExitOk);
    ASSERT_EQ(bad.code, kExitUsage);
}

TEST(cli_schedule, adder_and_trace_file) {
    auto trace_path = scratch("trace.jsonl");
    auto r = run({"--out", trace_path.string(), "schedule", "--m", "1000"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_TRUE(contains(r.out, "makespan ≈ 20.1 ms")) << r.out;
    std::istringstream lines(slurp(trace_path));
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
        ASSERT_TRUE(nlohmann::json::accept(line)) << line;
        n++;
    }
    ASSERT_GT(n, 1997u);

    ASSERT_EQ(run({"schedule", "--m", "1"}).code, kExitError);
    ASSERT_EQ(run({"schedule", "--mode", "sideways"}).code, kExitUsage);
    ASSERT_EQ(run({"--out", "/no/such/dir/trace.jsonl", "schedule"}).code, kExitError);

    auto lookup = run({"--json", "schedule", "--mode", "lookup", "--sides", "1"});
    auto lookup_json = nlohmann::json::parse(lookup.out);
    ASSERT_EQ(lookup_json.at("limiting_factor"), "access");
    ASSERT_NEAR(lookup_json.at("access_rate_khz").get<double>(), 1e6 / 27000, 1e-9);
    ASSERT_TRUE(contains(run({"schedule", "--mode", "lookup"}).out, "CNOT access rate: 74.1 kHz, sides: 2"));
    ASSERT_FALSE(contains(r.out, "CNOT access rate"));
}

TEST(cli_layout, writes_valid_artifacts) {
    auto prefix = scratch("lookup").string();
    auto r = run({"layout", "--pattern", "R_L_L_R", "--out", prefix});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_TRUE(contains(r.out, "validator: pass"));
    auto svg = slurp(prefix + ".svg");
    ASSERT_TRUE(contains(svg, "<svg"));
    ASSERT_EQ(run({"layout", "--pattern", "R_L_L_R", "--out", prefix}).out, r.out);
    ASSERT_EQ(slurp(prefix + ".svg"), svg);

    auto adder = run({"--json", "layout", "--m", "64", "--factories", "4", "--d1", "17", "--d2", "27"});
    auto j = nlohmann::json::parse(adder.out);
    ASSERT_EQ(j.at("valid"), true);
    ASSERT_EQ(j.at("fixup_boxes"), 8);
    ASSERT_EQ(j.at("maj_block_volume"), 45);
    ASSERT_EQ(j.at("routing_volume_ratio"), 4.0);

    ASSERT_EQ(run({"layout", "--m", "64", "--factories", "1"}).code, kExitError);
    ASSERT_EQ(run({"layout", "--pattern", "spiral"}).code, kExitUsage);
    ASSERT_EQ(run({"layout", "--d2", "28", "--d1", "17"}).code, kExitError);
}

TEST(cli_usage, errors_and_help) {
    ASSERT_EQ(run({}).code, kExitUsage);
    ASSERT_EQ(run({"frobnicate"}).code, kExitUsage);
    ASSERT_EQ(run({"estimate", "--cycle-time", "abc"}).code, kExitUsage);
    auto help = run({"--help"});
    ASSERT_EQ(help.code, kExitOk);
    ASSERT_TRUE(contains(help.out, "estimate"));
}
