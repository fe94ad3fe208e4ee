// Copyright 2026 The Narrative Miner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "narrative/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "support/iraq_project.h"
#include "support/test_paths.h"

namespace narrative {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::CliResult;
using testing::CopyIraqProject;
using testing::GoldenPath;
using testing::kIraqNarratives;
using testing::MineIraq;
using testing::ReadFile;
using testing::RunIn;
using testing::TempDir;
using testing::WriteFile;

class IraqProject : public ::testing::Test {
 protected:
  void SetUp() override { CopyIraqProject(dir_.path()); }
  const fs::path& root() const { return dir_.path(); }
  CliResult Run(std::vector<std::string> args) { return RunIn(root(), std::move(args)); }

  TempDir dir_;
};

void CheckGolden(const std::string& name, const std::string& actual) {
  const fs::path path = GoldenPath(name);
  if (testing::UpdateGolden()) {
    WriteFile(path, actual);
    return;
  }
  ASSERT_TRUE(fs::exists(path)) << path << " missing; rerun with UPDATE_GOLDEN=1";
  EXPECT_EQ(ReadFile(path), actual) << "golden " << name << " differs";
}

TEST_F(IraqProject, MinedNarrativesMatchGoldens) {
  ASSERT_EQ(MineIraq(root()), "");
  for (const std::string& nid : kIraqNarratives) {
    const CliResult r = Run({"export", "--narrative", nid});
    ASSERT_EQ(r.code, 0) << r.err;
    CheckGolden("iraq/" + nid.substr(0, 2) + ".json", r.out);
  }
  const CliResult c = Run({"compare", "--narratives", "US/iraq-war", "UK/iraq-war",
                           "RU/iraq-war"});
  ASSERT_EQ(c.code, 0) << c.err;
  CheckGolden("iraq/compare.json", c.out);
  EXPECT_EQ(ReadFile(root() / "reports/compare.json"), c.out);
  EXPECT_TRUE(fs::exists(root() / "reports/compare.dot"));
}

TEST_F(IraqProject, IngestReportsFilteredDocuments) {
  const CliResult r = Run({"ingest", "manifest.jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "accepted 13, rejected 3, unreadable 0\n");
  const json report = json::parse(ReadFile(root() / "reports/ingest.json"));
  EXPECT_EQ(report["per_viewpoint"], json({{"RU", 4}, {"UK", 4}, {"US", 5}}));
  ASSERT_EQ(report["rejected"].size(), 3u);
  EXPECT_EQ(report["rejected"][0]["path"], "corpus/us-short.txt");
  EXPECT_TRUE(fs::exists(root() / "store.json"));
}

TEST_F(IraqProject, MinePrintsNarrativeIdAndRecurses) {
  ASSERT_EQ(Run({"ingest", "manifest.jsonl"}).code, 0);
  const CliResult r = Run({"mine", "--event", "Iraq War", "--viewpoint", "US"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "US/iraq-war\n");
  const json report = json::parse(ReadFile(root() / "reports/mine-us-iraq-war.json"));
  EXPECT_EQ(report["counts"]["documents_detected"], 4);
  EXPECT_EQ(report["counts"]["recursion_fan_out"], 1);
  const json exported =
      json::parse(Run({"export", "--narrative", "US/iraq-war"}).out);
  ASSERT_EQ(exported["narratives"].size(), 2u);
  EXPECT_EQ(exported["narratives"][1]["id"], "US/operation-iraqi-freedom");
}

TEST_F(IraqProject, DepthZeroDisablesRecursion) {
  ASSERT_EQ(Run({"ingest", "manifest.jsonl"}).code, 0);
  ASSERT_EQ(Run({"mine", "--event", "Iraq War", "--viewpoint", "US", "--depth", "0"})
                .code,
            0);
  const json exported =
      json::parse(Run({"export", "--narrative", "US/iraq-war"}).out);
  EXPECT_EQ(exported["narratives"].size(), 1u);
}

TEST_F(IraqProject, MiningIsReproducibleAcrossProjects) {
  ASSERT_EQ(MineIraq(root()), "");
  TempDir other;
  CopyIraqProject(other.path());
  ASSERT_EQ(MineIraq(other.path()), "");
  EXPECT_EQ(ReadFile(root() / "store.json"), ReadFile(other.path() / "store.json"));
}

TEST_F(IraqProject, MiningAgainReplacesTheNarrative) {
  ASSERT_EQ(MineIraq(root()), "");
  const std::string before = ReadFile(root() / "store.json");
  const CliResult r = Run({"mine", "--event", "Iraq War", "--viewpoint", "US"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "US/iraq-war\n");
  const json a = json::parse(before), b = json::parse(ReadFile(root() / "store.json"));
  EXPECT_EQ(a["narratives"].size(), b["narratives"].size());
  EXPECT_EQ(Run({"export", "--narrative", "US/iraq-war"}).out,
            RunIn(root(), {"export", "--narrative", "US/iraq-war"}).out);
}

TEST_F(IraqProject, ExportNeverWritesTheStore) {
  ASSERT_EQ(MineIraq(root()), "");
  const std::string before = ReadFile(root() / "store.json");
  const auto mtime = fs::last_write_time(root() / "store.json");
  ASSERT_EQ(Run({"export", "--narrative", "UK/iraq-war", "--format", "dot"}).code, 0);
  ASSERT_EQ(Run({"export", "--narrative", "UK/iraq-war", "--output", "out/uk.json"}).code,
            0);
  EXPECT_EQ(ReadFile(root() / "store.json"), before);
  EXPECT_EQ(fs::last_write_time(root() / "store.json"), mtime);
  EXPECT_EQ(ReadFile(root() / "out/uk.json"),
            Run({"export", "--narrative", "UK/iraq-war"}).out);
  const std::string dot =
      Run({"export", "--narrative", "US/iraq-war", "--format", "dot"}).out;
  EXPECT_EQ(dot.rfind("digraph \"US/iraq-war\"", 0), 0u) << dot;
}

TEST_F(IraqProject, CompareFlagsOverrideConfig) {
  ASSERT_EQ(MineIraq(root()), "");
  const CliResult strict = Run({"compare", "--narratives", "US/iraq-war",
                                "UK/iraq-war", "--threshold", "0.95"});
  ASSERT_EQ(strict.code, 0) << strict.err;
  const json r = json::parse(strict.out);
  EXPECT_EQ(r["sim_threshold"], 0.95);
  EXPECT_TRUE(r["commonalities"].empty());
  const json flat = json::parse(
      Run({"compare", "--narratives", "US/iraq-war", "--flatten"}).out);
  EXPECT_EQ(flat["flatten"], true);
  // Child narrative events count for a single flattened narrative.
  EXPECT_EQ(flat["commonalities"].size(), 7u);
}

TEST_F(IraqProject, BindAgainstSnapshot) {
  ASSERT_EQ(MineIraq(root()), "");
  fs::copy(testing::DataPath("kremlin/kg_snapshot.json"), root() / "kg_snapshot.json");
  std::string config = ReadFile(root() / "narrmine.toml");
  config.replace(config.find("[binding]\n"), 10, "[binding]\nsimilarity = \"edit\"\n");
  WriteFile(root() / "narrmine.toml", config);
  const CliResult r = Run({"bind", "--narrative", "UK/iraq-war"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("bound 5 events in 1 narratives: ", 0), 0u) << r.out;
  const json report = json::parse(ReadFile(root() / "reports/bind-uk-iraq-war.json"));
  EXPECT_FALSE(report.empty());
  const json exported = json::parse(Run({"export", "--narrative", "UK/iraq-war"}).out);
  const json& invasion = exported["narratives"][0]["events"][1];
  ASSERT_EQ(invasion["label"], "Invasion of Iraq");
  EXPECT_EQ(invasion["binding"]["kg_id"], "Q107802") << invasion.dump();
}

TEST_F(IraqProject, UsageErrorsExitOne) {
  CliResult r = Run({"frobnicate"});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  EXPECT_EQ(Run({}).code, kExitUserError);
  EXPECT_EQ(Run({"mine", "--event", "Iraq War"}).code, kExitUserError);
  EXPECT_EQ(Run({"export", "--narrative", "x", "--format", "svg"}).code, kExitUserError);
  EXPECT_EQ(Run({"compare", "--narratives", "a", "--threshold", "2"}).code,
            kExitUserError);
  r = Run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("compare"), std::string::npos);
}

TEST_F(IraqProject, CommandErrorsExitOneWithOneLine) {
  CliResult r = Run({"mine", "--event", "Iraq War", "--viewpoint", "US"});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_NE(r.err.find("run ingest first"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  ASSERT_EQ(Run({"ingest", "manifest.jsonl"}).code, 0);
  r = Run({"mine", "--event", "Iraq War", "--viewpoint", "FR"});
  EXPECT_EQ(r.code, kExitUserError);
  r = Run({"mine", "--event", "Moon Landing", "--viewpoint", "US"});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_NE(r.err.find("Moon Landing"), std::string::npos) << r.err;
  r = Run({"mine", "--event", "Iraq War", "--viewpoint", "US", "--timespan", "2011/2001"});
  EXPECT_EQ(r.code, kExitUserError);
  r = Run({"export", "--narrative", "US/nothing"});
  EXPECT_EQ(r.code, kExitUserError);
  r = Run({"bind", "--narrative", "US/nothing"});
  EXPECT_EQ(r.code, kExitUserError);
  r = Run({"ingest", "missing.jsonl"});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_EQ(RunIn(root() / "absent", {"cache", "stats"}).code, kExitUserError);
}

TEST_F(IraqProject, BackendFailureExitsTwo) {
  ASSERT_EQ(Run({"ingest", "manifest.jsonl"}).code, 0);
  WriteFile(root() / "mock_script.json",
            R"({"defaults": {"detect_event": "$unavailable"}})");
  const CliResult r = Run({"mine", "--event", "Iraq War", "--viewpoint", "UK"});
  EXPECT_EQ(r.code, kExitBackendFailure) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(IraqProject, BadConfigExitsOne) {
  WriteFile(root() / "narrmine.toml", "[llm]\nbackend = \"telepathy\"\n");
  const CliResult r = Run({"ingest", "manifest.jsonl"});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(IraqProject, LockBlocksConcurrentCommands) {
  WriteFile(root() / ".narrmine.lock", "12345\n");
  CliResult r = Run({"ingest", "manifest.jsonl"});
  EXPECT_EQ(r.code, kExitUserError);
  EXPECT_NE(r.err.find(".narrmine.lock"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(root() / "store.json"));
  fs::remove(root() / ".narrmine.lock");
  r = Run({"ingest", "manifest.jsonl"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(fs::exists(root() / ".narrmine.lock"));
}

TEST_F(IraqProject, CacheCommands) {
  CliResult r = Run({"cache", "stats"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "llm: 0 entries, 0 bytes\nhttp: 0 entries, 0 bytes\n");
  r = Run({"cache", "clear"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "removed 0 cached responses\n");
  EXPECT_EQ(Run({"cache", "purge"}).code, kExitUserError);
}

}  // namespace
}  // namespace narrative
