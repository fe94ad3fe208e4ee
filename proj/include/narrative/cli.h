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

#ifndef NARRATIVE_CLI_H_
#define NARRATIVE_CLI_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace narrative {

// Files of a project rooted at one directory.
struct ProjectLayout {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "narrmine.toml"; }
  std::filesystem::path documents() const { return root / "corpus" / "documents.jsonl"; }
  std::filesystem::path llm_cache() const { return root / "cache" / "llm"; }
  std::filesystem::path http_cache() const { return root / "cache" / "http"; }
  std::filesystem::path store() const { return root / "store.json"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path lock() const { return root / ".narrmine.lock"; }
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitBackendFailure = 2;

// Runs one command; `args` excludes the program name. Results go to `out`,
// diagnostics to `err` as a single line.
//
//   narrmine [--root DIR] ingest <manifest>
//   narrmine [--root DIR] mine --event E --viewpoint V [--depth N]
//   narrmine [--root DIR] bind --narrative N [--source snapshot|live]
//   narrmine [--root DIR] compare --narratives A B... [--flatten]
//   narrmine [--root DIR] export --narrative N [--format json|dot] [--output F]
//   narrmine [--root DIR] cache {clear,stats}
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace narrative

#endif  // NARRATIVE_CLI_H_
