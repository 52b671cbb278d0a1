/*
Copyright 2026 The rbpebble Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "rbpebble_cli.hpp"

namespace rbpebble {
namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rbpebble");
    std::vector<char *> argv;
    for (std::string &a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("rbpebble_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    std::string gen(const std::string &family, int nodes, const std::string &name) {
        const Outcome o = run_cli({"gen", "--family", family, "--nodes", std::to_string(nodes), "--seed", "3"});
        EXPECT_EQ(o.code, 0) << o.err;
        write_file(path(name), o.out);
        return path(name);
    }

    std::filesystem::path dir_;
};

TEST_F(Cli, GenWritesALoadableGraph) {
    const std::string g = gen("random_delta", 9, "g.json");
    const Dag d = graph_from_text(read_file(g));
    EXPECT_EQ(d.node_count(), 9u);
    EXPECT_EQ(d.delta(), 2u);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({"gen", "--family", "star", "--nodes", "4"}).code, 2);
    EXPECT_EQ(run_cli({"gen", "--family", "path", "--nodes", "4", "--bogus"}).code, 2);
    EXPECT_EQ(run_cli({"gen", "--nodes", "4"}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({}).code, 2);
    const std::string g = gen("path", 4, "p.json");
    EXPECT_EQ(run_cli({"simulate", "--graph", g, "--cache", "2", "--strategy", "lru"}).code, 2);
}

TEST_F(Cli, MissingOrMalformedFiles) {
    EXPECT_EQ(run_cli({"eval", "--graph", path("absent.json")}).code, 3);
    write_file(path("bad.json"), "{ nope");
    const Outcome o = run_cli({"eval", "--graph", path("bad.json")});
    EXPECT_EQ(o.code, 3);
    EXPECT_FALSE(o.err.empty());
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(run_cli({"--help"}).code, 0); }

TEST_F(Cli, SimulateOnAPath) {
    const std::string g = gen("path", 8, "p.json");
    const Outcome roomy = run_cli({"simulate", "--graph", g, "--cache", "8", "--n", "8", "--seed", "1"});
    ASSERT_EQ(roomy.code, 0) << roomy.err;
    const Json r = parse_json(roomy.out);
    EXPECT_EQ(r.at("words_moved").get<std::uint64_t>(), 0u);
    EXPECT_EQ(r.at("queries").get<std::uint64_t>(), 8u);
    const Outcome tight = run_cli({"simulate", "--graph", g, "--cache", "1", "--n", "8", "--seed", "1"});
    ASSERT_EQ(tight.code, 0) << tight.err;
    EXPECT_EQ(parse_json(tight.out).at("words_moved").get<std::uint64_t>(), 0u);
}

TEST_F(Cli, SimulateWritesATrace) {
    const std::string g = gen("random_delta", 7, "g.json");
    const Outcome o = run_cli({"simulate", "--graph", g, "--cache", "2", "--trace", path("t.jsonl")});
    ASSERT_EQ(o.code, 0) << o.err;
    const ExecutionTrace tr = trace_from_text(read_file(path("t.jsonl")));
    EXPECT_EQ(tr.query_count(), parse_json(o.out).at("queries").get<std::size_t>());
}

TEST_F(Cli, SameArgumentsSameBytes) {
    const std::string g = gen("random_delta", 6, "g.json");
    const std::vector<std::vector<std::string>> cmds{
        {"eval", "--graph", g, "--n", "12", "--seed", "5"},
        {"simulate", "--graph", g, "--cache", "3", "--seed", "5"},
        {"collide", "--graph", g, "--n", "6", "--trials", "200", "--seed", "5"},
        {"rbcost", "--graph", g, "--m", "2"},
        {"extend", "--graph", g, "--m", "1"},
        {"predict", "--graph", g, "--cache", "2", "--threshold", "1", "--seed", "5"},
        {"check-theorem1", "--graph", g, "--m", "2", "--seed", "5"},
    };
    for (const auto &c : cmds) {
        const Outcome a = run_cli(c), b = run_cli(c);
        EXPECT_EQ(a.code, b.code) << c[0];
        EXPECT_EQ(a.out, b.out) << c[0];
        EXPECT_FALSE(a.out.empty()) << c[0] << ": " << a.err;
    }
}

TEST_F(Cli, RbcostOfAPath) {
    const std::string g = gen("path", 3, "p.json");
    const Outcome o = run_cli({"rbcost", "--graph", g, "--m", "1", "--cb", "4", "--cr", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("\"3\""), std::string::npos) << o.out;
}

TEST_F(Cli, CheckTheorem1Holds) {
    const std::string g = gen("path", 3, "p.json");
    const Outcome o = run_cli({"check-theorem1", "--graph", g, "--m", "1", "--cb", "4", "--cr", "1"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("holds"), std::string::npos) << o.out;
}

TEST(CliBinary, ExitCodes) {
    const std::string bin = RBPEBBLE_CLI_PATH;
    EXPECT_EQ(std::system((bin + " gen --family path --nodes 3 > /dev/null").c_str()), 0);
    EXPECT_NE(std::system((bin + " gen --family nope --nodes 3 > /dev/null 2>&1").c_str()), 0);
}

}  // namespace
}  // namespace rbpebble
