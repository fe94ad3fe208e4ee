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

#ifndef NARRATIVE_CONFIG_H_
#define NARRATIVE_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "narrative/binder.h"
#include "narrative/compare.h"
#include "narrative/corpus.h"
#include "narrative/miner.h"
#include "narrative/model.h"

namespace narrative {

// Project configuration. The file is a subset of TOML:
//
//   # comment
//   [section]                 or  [viewpoint.RU]  or  [relation."lead up to"]
//   key = <value>
//
// where a value is a double-quoted string, a number, true/false or an array
// of those. Relative paths resolve against the file's directory. Unknown
// sections and keys are errors. Credentials never live in the file: they
// come from NARRMINE_LLM_API_KEY and NARRMINE_EMBEDDING_API_KEY.
struct ProjectConfig {
  IngestOptions ingest;

  struct Llm {
    std::string backend = "mock";  // mock | http
    std::filesystem::path mock_script;
    std::string endpoint;
    std::string model = "llama-3-70b-instruct";
    // Optional prompt overrides, see PromptSet::FromFile.
    std::filesystem::path prompts;
    int max_retries = 2;
    int timeout_ms = 60000;
    std::optional<std::string> api_key;
  } llm;

  struct Embedding {
    std::string backend = "hashing";  // hashing | fixture | http
    std::filesystem::path table;
    size_t dimension = 64;
    // For the fixture backend: embed unknown texts by hashing instead of
    // failing.
    bool hashing_fallback = false;
    std::string endpoint;
    int max_retries = 2;
    int timeout_ms = 30000;
    std::optional<std::string> api_key;
  } embedding;

  // event_name and viewpoint are filled per command.
  MineConfig mining;

  struct Binding {
    std::string source = "snapshot";  // snapshot | live
    std::filesystem::path snapshot;
    // "embedding" compares labels with the embedding backend, "edit" with
    // normalized edit similarity.
    std::string similarity = "embedding";
    BindOptions options;
    LiveSource::Options live;
  } binding;

  CompareOptions compare;
  std::vector<Viewpoint> viewpoints;
  std::vector<RelationPredicate> relations;
};

// Throws ParseError with the line number on malformed input and
// InvalidArgument on bad values.
ProjectConfig ParseConfig(std::string_view text,
                          const std::filesystem::path& base_dir);
// Also reads the credential environment variables.
ProjectConfig LoadConfig(const std::filesystem::path& path);

// A store holding the configured viewpoints and relations.
NarrativeStore NewStore(const ProjectConfig& config);
// Adds configured viewpoints and relations the store lacks.
void ApplyConfig(const ProjectConfig& config, NarrativeStore& store);

}  // namespace narrative

#endif  // NARRATIVE_CONFIG_H_
