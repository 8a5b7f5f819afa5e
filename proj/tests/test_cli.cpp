/*
   Copyright 2026 The kpzlab Authors

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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "kpzlab/io.hpp"

namespace {

const std::filesystem::path kTmp = std::filesystem::temp_directory_path() / "kpzlab_cli_test";

int run(const std::string& args, const std::string& env = "")
{
    std::filesystem::create_directories(kTmp);
    const std::string cmd = env + " " + KPZLAB_CLI_PATH + " " + args + " >" + (kTmp / "stdout.txt").string() + " 2>" + (kTmp / "stderr.txt").string();
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Cli, ChaosVerifySucceeds)
{
    const auto out = kTmp / "chaos.csv";
    std::filesystem::remove(out);
    EXPECT_EQ(run("chaos-verify --n 8 --seed 42 --out " + out.string()), 0);
    const std::string s = slurp(out);
    EXPECT_NE(s.find("trial,N,y,env_seed,probability,residual,poly_rel_error"), std::string::npos);
}

TEST(Cli, BadConfigurationExitsOneWithoutFile)
{
    const auto out = kTmp / "ldp.csv";
    std::filesystem::remove(out);
    EXPECT_EQ(run("ldp-check --t 0 --out " + out.string()), 1);
    EXPECT_FALSE(std::filesystem::exists(out));
    EXPECT_EQ(run("rwre-mc --eps 0.9 --out " + out.string()), 1);
    EXPECT_FALSE(std::filesystem::exists(out));
    EXPECT_EQ(run("moments --k 3"), 1);
    EXPECT_EQ(run("no-such-command"), 1);
    EXPECT_EQ(run("ldp-check --v"), 1);
}

TEST(Cli, LawCheckSucceeds) { EXPECT_EQ(run("law-check --n 3"), 0); }

TEST(Cli, ToleranceFailureExitsTwo)
{
    EXPECT_EQ(run("ldp-check --eps 0.2,0.1 --tol 1e-6"), 2);
}

TEST(Cli, SeedFromEnvironmentAndFlagOverride)
{
    ASSERT_EQ(run("rwre-mc --replicas 3 --eps 0.2 --format json", "KPZLAB_SEED=77"), 0);
    auto j = kpzlab::json::parse(slurp(kTmp / "stdout.txt"));
    EXPECT_EQ(j["manifest"]["seed"].get<std::uint64_t>(), 77u);
    ASSERT_EQ(run("rwre-mc --replicas 3 --eps 0.2 --format json --seed 5", "KPZLAB_SEED=77"), 0);
    j = kpzlab::json::parse(slurp(kTmp / "stdout.txt"));
    EXPECT_EQ(j["manifest"]["seed"].get<std::uint64_t>(), 5u);
    EXPECT_EQ(run("rwre-mc --replicas 3", "KPZLAB_SEED=x1"), 1);
}

TEST(Cli, ThreadCountDoesNotChangeBody)
{
    ASSERT_EQ(run("rwre-mc --replicas 30 --eps 0.2,0.1 --threads 1 --out " + (kTmp / "a.csv").string()), 0);
    ASSERT_EQ(run("rwre-mc --replicas 30 --eps 0.2,0.1 --threads 4 --out " + (kTmp / "b.csv").string()), 0);
    auto body = [](const std::string& s) { return s.substr(s.find("\nepsilon,")); };
    EXPECT_EQ(body(slurp(kTmp / "a.csv")), body(slurp(kTmp / "b.csv")));
}
