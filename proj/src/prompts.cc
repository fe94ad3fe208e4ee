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

#include "narrative/prompts.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "narrative/error.h"

namespace narrative {
namespace {

using Json = nlohmann::json;

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Position just past the closing brace when `s[i]` opens a placeholder.
size_t PlaceholderEnd(const std::string& s, size_t i) {
  if (s[i] != '{') return std::string::npos;
  size_t j = i + 1;
  while (j < s.size() && IsIdentChar(s[j])) ++j;
  if (j == i + 1 || j >= s.size() || s[j] != '}') return std::string::npos;
  return j + 1;
}

PromptTemplate Make(std::string name, std::string skeleton,
                    std::vector<std::pair<std::string, std::string>> shots = {}) {
  return {std::move(name), std::move(skeleton), std::move(shots)};
}

}  // namespace

std::vector<std::string> Placeholders(const std::string& skeleton) {
  std::vector<std::string> out;
  for (size_t i = 0; i < skeleton.size(); ++i) {
    const size_t end = PlaceholderEnd(skeleton, i);
    if (end == std::string::npos) continue;
    std::string name = skeleton.substr(i + 1, end - i - 2);
    if (std::find(out.begin(), out.end(), name) == out.end()) {
      out.push_back(std::move(name));
    }
    i = end - 1;
  }
  return out;
}

std::string Render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& values) {
  std::string examples;
  for (const auto& [in, out] : tmpl.few_shot) {
    examples += in + " -- " + out + "\n";
  }
  const std::string& s = tmpl.skeleton;
  std::string result;
  result.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    const size_t end = PlaceholderEnd(s, i);
    if (end == std::string::npos) {
      result += s[i++];
      continue;
    }
    const std::string name = s.substr(i + 1, end - i - 2);
    auto it = values.find(name);
    if (it != values.end()) {
      result += it->second;
    } else if (name == "examples") {
      result += examples;
    } else {
      throw Error(ErrorCode::kMissingPlaceholder,
                  tmpl.name + ": {" + name + "}");
    }
    i = end;
  }
  return result;
}

PromptSet PromptSet::Defaults() {
  PromptSet set;
  set.Set(Make(kDetectEvent,
               "Here is a news article: '{text}' Is this article clearly about "
               "the {event} that took place between {start} and {end}? Answer "
               "with yes or no."));
  set.Set(Make(kDetectSubevent,
               "Here is a news article: '{text}' Is this article clearly about "
               "the {event}, as part of the {parent_event} that took place "
               "between {start} and {end}? Answer with yes or no."));
  set.Set(Make(kExtractTimeline,
               "Here is a news article: '{text}' List the major events of the "
               "{event} in chronological order as reported in the article. "
               "Keep it consise and remove everything unrelated."));
  set.Set(Make(
      kLabelEvent,
      "Write a short event label and the time of the event for the last "
      "description, following the examples.\n{examples}{sentence} --",
      {{"On 15 February 2003, millions of people marched in London against "
        "the planned war.",
        "Anti-War March in London (February 2003)"},
       {"The United Nations adopted Resolution 1441, giving Iraq a final "
        "opportunity to comply with its disarmament obligations.",
        "UN Security Council Resolution 1441 (November 2002)"},
       {"Saddam Hussein was captured by American troops near Tikrit.",
        "Capture of Saddam Hussein (December 2003)"}}));
  set.Set(Make(
      kVerifyEvent,
      "Here is a news article: '{text}' Is the following event mentioned in "
      "the article? Answer with yes or no.\n{examples}{label} --",
      {{"Anti-War March in London (February 2003)", "yes"},
       {"Capture of Saddam Hussein (December 2003)", "no"}}));
  set.Set(Make(kSynthesizeLabel,
               "The following event labels describe the same event:\n"
               "{labels}\nWrite one concise label for this event. Answer with "
               "the label only."));
  set.Set(Make(kInferRelation,
               "Event A: {event_a} ({time_a})\nEvent B: {event_b} ({time_b})\n"
               "Which relationship holds between the two events? Choose one "
               "of: {predicates}. Answer in the form 'A <relationship> B', or "
               "answer 'none' if no relationship holds."));
  return set;
}

PromptSet PromptSet::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileUnreadable, path.string());
  PromptSet set = Defaults();
  try {
    const Json j = Json::parse(in);
    for (const auto& [name, t] : j.at("templates").items()) {
      PromptTemplate tmpl;
      tmpl.name = name;
      tmpl.skeleton = t.at("skeleton").get<std::string>();
      if (t.contains("few_shot")) {
        for (const Json& pair : t.at("few_shot")) {
          tmpl.few_shot.emplace_back(pair.at(0).get<std::string>(),
                                     pair.at(1).get<std::string>());
        }
      }
      set.Set(std::move(tmpl));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return set;
}

std::string PromptSet::ToJson() const {
  Json templates = Json::object();
  for (const auto& [name, t] : templates_) {
    Json shots = Json::array();
    for (const auto& [in, out] : t.few_shot) shots.push_back({in, out});
    templates[name] = {{"few_shot", shots}, {"skeleton", t.skeleton}};
  }
  return Json{{"templates", templates}}.dump(2) + "\n";
}

const PromptTemplate& PromptSet::Get(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "no prompt template " + name);
  }
  return it->second;
}

void PromptSet::Set(PromptTemplate tmpl) {
  templates_[tmpl.name] = std::move(tmpl);
}

}  // namespace narrative
