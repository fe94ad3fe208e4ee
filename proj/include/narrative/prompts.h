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

#ifndef NARRATIVE_PROMPTS_H_
#define NARRATIVE_PROMPTS_H_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace narrative {

// Template names used by the mining tasks.
inline constexpr char kDetectEvent[] = "detect_event";
inline constexpr char kDetectSubevent[] = "detect_subevent";
inline constexpr char kExtractTimeline[] = "extract_timeline";
inline constexpr char kLabelEvent[] = "label_event";
inline constexpr char kVerifyEvent[] = "verify_event";
inline constexpr char kSynthesizeLabel[] = "synthesize_label";
inline constexpr char kInferRelation[] = "infer_relation";

struct PromptTemplate {
  std::string name;
  // Text with {identifier} placeholders. Braces not enclosing an identifier
  // are literal.
  std::string skeleton;
  // Rendered into the {examples} placeholder as "input -- output" lines.
  std::vector<std::pair<std::string, std::string>> few_shot;

  bool operator==(const PromptTemplate&) const = default;
};

// Placeholder names appearing in the skeleton, in order of first use.
std::vector<std::string> Placeholders(const std::string& skeleton);

// Single pass over the skeleton: values are inserted verbatim and never
// re-scanned, so braces inside a document survive. {examples} is provided
// from few_shot unless given explicitly. Throws MissingPlaceholder when a
// placeholder has no value.
std::string Render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& values);

class PromptSet {
 public:
  static PromptSet Defaults();
  // JSON {"templates": {name: {"skeleton": ..., "few_shot": [[in, out]]}}};
  // listed templates replace the defaults, others keep them.
  static PromptSet FromFile(const std::filesystem::path& path);
  std::string ToJson() const;

  const PromptTemplate& Get(const std::string& name) const;
  void Set(PromptTemplate tmpl);
  const std::map<std::string, PromptTemplate>& templates() const {
    return templates_;
  }

 private:
  std::map<std::string, PromptTemplate> templates_;
};

}  // namespace narrative

#endif  // NARRATIVE_PROMPTS_H_
