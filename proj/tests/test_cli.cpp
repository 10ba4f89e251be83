// Copyright 2026 The qdisco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdisco/cli.hpp"
#include "qdisco/serialization.hpp"

namespace qdisco {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kConfigs = QDISCO_CONFIG_DIR;

struct Invocation {
    int code = 0;
    std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qdisco");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("qdisco_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        unsetenv("QDISCO_SEED");
    }
    void TearDown() override {
        fs::remove_all(dir_);
        unsetenv("QDISCO_SEED");
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(invoke({}).code, kExitUsage);
    EXPECT_EQ(invoke({"--help"}).code, kExitOk);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(invoke({"compile", "--qpu", kConfigs + "/missing.json", "--problem", kConfigs + "/triangle.json"}).code, kExitUsage);
    EXPECT_EQ(invoke({"partition", "--problem", kConfigs + "/labs6.json", "--capacities", "3,3"}).code, kExitUsage);
    EXPECT_EQ(invoke({"partition", "--problem", kConfigs + "/decompose15/problem15.json", "--capacities", "4,4"}).code,
              kExitDomainError);
    EXPECT_EQ(invoke({"simulate", "--problem", kConfigs + "/triangle.json", "--gammas", "0.1,0.2", "--betas", "0.1"}).code,
              kExitUsage);
}

TEST_F(Cli, EtaOutOfRangeNamesValue) {
    const auto r = invoke({"plan", "--config", kConfigs + "/fleet5/run.json", "--eta", "1.5"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("eta must lie in (0, 1], got 1.5"), std::string::npos) << r.err;
}

TEST_F(Cli, CompileReportsFilterAndPlacements) {
    const auto r = invoke({"compile", "--qpu", kConfigs + "/hex16.json", "--problem", kConfigs + "/triangle.json", "--eta", "0.05"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc["qpu"], "hex16");
    EXPECT_EQ(doc["filtered"]["predicate_evaluations"].get<int>(), 16 + 16);
    ASSERT_FALSE(doc["placements"].empty());
    const Placement p = placement_from_json(doc["placements"][0]["placement"].dump());
    EXPECT_EQ(p.region.size(), 3);
    EXPECT_EQ(placement_from_json(to_json(p)), p);
}

TEST_F(Cli, PartitionSizesAndRoundTrip) {
    const auto r = invoke({"partition", "--problem", kConfigs + "/decompose15/problem15.json", "--capacities", "4,5,6", "--seed", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["subproblems"].size(), 3u);
    doc.erase("subproblems");
    const Partition p = partition_from_json(doc.dump());
    EXPECT_EQ(p.part_sizes(), (std::vector<int>{4, 5, 6}));
    EXPECT_EQ(partition_from_json(to_json(p)), p);
}

TEST_F(Cli, PlanFleet5) {
    const auto r = invoke({"plan", "--config", kConfigs + "/fleet5/run.json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_DOUBLE_EQ(doc["speedup"]["speedup"].get<double>(), 6.0);
    const ExecutionPlan p = plan_from_json(doc["plan"].dump());
    EXPECT_EQ(p.num_regions(), 6);
    EXPECT_EQ(plan_from_json(to_json(p)), p);
}

TEST_F(Cli, RunDecomposedIsDeterministicAndRoundTrips) {
    const auto a = invoke({"run", "--config", kConfigs + "/decompose15/run.json", "--out", path("a.json")});
    const auto b = invoke({"run", "--config", kConfigs + "/decompose15/run.json", "--out", path("b.json")});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(b.code, kExitOk) << b.err;
    const std::string text = slurp(path("a.json"));
    EXPECT_EQ(text, slurp(path("b.json")));
    const auto doc = json::parse(text);
    const ExecutionPlan p = plan_from_json(doc["plan"].dump());
    EXPECT_EQ(p.leaf_sizes(), (std::vector<int>{6, 5, 4}));
    const RunResult result = run_result_from_json(doc["result"].dump());
    EXPECT_EQ(result.leaves.size(), 3u);
    EXPECT_GE(*result.cut, *result.concatenated_cut);
    EXPECT_EQ(run_result_from_json(to_json(result)), result);
}

TEST_F(Cli, BenchmarkWritesOneCsvRowPerLayer) {
    const auto r = invoke({"benchmark", "--problem", kConfigs + "/triangle.json", "--qpu", kConfigs + "/hex16.json", "--layers", "1..3",
                           "--mref", "100", "--m", "20", "--shots", "64", "--trajectories", "4", "--max-evaluations", "60", "--csv",
                           path("h.csv"), "--out", path("h.json"), "--seed", "1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream csv(slurp(path("h.csv")));
    std::vector<std::string> lines;
    for (std::string line; std::getline(csv, line);) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "layers,h_score");
    EXPECT_EQ(lines[3].substr(0, 2), "3,");
    const auto doc = json::parse(slurp(path("h.json")));
    ASSERT_EQ(doc["reports"].size(), 3u);
    const HScoreReport rep = hscore_report_from_json(doc["reports"][1].dump());
    EXPECT_EQ(rep.layers, 2);
    EXPECT_EQ(hscore_report_from_json(to_json(rep)), rep);
    EXPECT_EQ(invoke({"benchmark", "--problem", kConfigs + "/triangle.json", "--qpu", kConfigs + "/hex16.json", "--layers", "3..1"}).code,
              kExitUsage);
}

TEST_F(Cli, SeedEnvironmentFallback) {
    const std::vector<std::string> args{"simulate", "--problem", kConfigs + "/labs6.json", "--shots", "200", "--max-evaluations", "40"};
    auto with_flag = args;
    with_flag.insert(with_flag.end(), {"--seed", "5"});
    const auto flagged = invoke(with_flag);
    ASSERT_EQ(flagged.code, kExitOk) << flagged.err;
    setenv("QDISCO_SEED", "5", 1);
    EXPECT_EQ(invoke(args).out, flagged.out);
    setenv("QDISCO_SEED", "6", 1);
    EXPECT_NE(invoke(args).out, flagged.out);
    setenv("QDISCO_SEED", "five", 1);
    EXPECT_EQ(invoke(args).code, kExitUsage);
}

TEST_F(Cli, MetadataKeepsTimestampsOutOfResults) {
    const auto r = invoke({"simulate", "--problem", kConfigs + "/triangle.json", "--gammas", "0.4", "--betas", "0.3", "--qpu",
                           kConfigs + "/hex16.json", "--noise", "--metadata", path("meta.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.find("created_at"), std::string::npos);
    const auto meta = json::parse(slurp(path("meta.json")));
    EXPECT_EQ(meta["command"], "simulate");
    EXPECT_TRUE(meta.contains("created_at"));
    const auto doc = json::parse(r.out);
    EXPECT_EQ(shot_counts_from_json(doc["counts"].dump()).total(), 1024);
}

TEST(LayerRange, Parses) {
    EXPECT_EQ(parse_layer_range("2"), (std::pair<int, int>{2, 2}));
    EXPECT_EQ(parse_layer_range("1..4"), (std::pair<int, int>{1, 4}));
    EXPECT_THROW(parse_layer_range("0..2"), UsageError);
    EXPECT_THROW(parse_layer_range("a..b"), UsageError);
}

}  // namespace
}  // namespace qdisco
