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

#include "narrative/llm_tasks.h"

#include <algorithm>
#include <regex>

#include "narrative/error.h"
#include "narrative/text.h"

namespace narrative {
namespace {

std::string Call(LlmContext ctx, const std::string& template_name,
                 const std::map<std::string, std::string>& values,
                 const std::string& key) {
  const std::string prompt = Render(ctx.prompts.Get(template_name), values);
  return ctx.backend.Complete({template_name, prompt, key});
}

void Warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings != nullptr) warnings->push_back(std::move(message));
}

std::pair<std::string, std::string> SpanStrings(const TimeSpec& timespan) {
  const auto range = timespan.Range();
  if (!range) {
    throw Error(ErrorCode::kInvalidArgument, "timespan must be a known range");
  }
  const Granularity g = timespan.granularity;
  return {FormatIsoDate(range->first, g), FormatIsoDate(range->second, g)};
}

std::string StripQuotes(std::string_view s) {
  s = Trim(s);
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  while (s.size() >= 2 && s.front() == s.back() &&
         std::string_view("\"'`").find(s.front()) != std::string_view::npos) {
    s = Trim(s.substr(1, s.size() - 2));
  }
  return std::string(Trim(s));
}

}  // namespace

bool ParseYesNo(const std::string& answer) {
  static const std::regex kWord("^[^A-Za-z]*([A-Za-z]+)");
  std::smatch m;
  if (std::regex_search(answer, m, kWord)) {
    const std::string w = ToLower(m[1].str());
    if (w == "yes" || w == "true") return true;
    if (w == "no" || w == "false") return false;
  }
  throw Error(ErrorCode::kUnparseableAnswer,
              "expected yes or no: " + answer.substr(0, 80));
}

std::vector<std::string> ParseList(const std::string& answer,
                                   std::vector<std::string>* warnings) {
  static const std::regex kItem(
      "^\\s*(?:[-*]|\\d{1,3}[.):]|\\(\\d{1,3}\\)|[a-z][.)])(?:\\s+(.*))?$");
  static const std::regex kBullet("^\\s*\\xE2\\x80\\xA2\\s*(.*)$");
  std::vector<std::string> marked;
  std::vector<std::string> plain;
  for (const std::string& raw : SplitLines(answer)) {
    const std::string line(Trim(raw));
    if (line.empty()) continue;
    std::smatch m;
    if (std::regex_match(line, m, kItem) || std::regex_match(line, m, kBullet)) {
      const std::string item(Trim(m[1].str()));
      if (!item.empty()) {
        marked.push_back(item);
      } else {
        Warn(warnings, "dropped empty list item");
      }
    } else {
      plain.push_back(line);
    }
  }
  std::vector<std::string> items;
  if (!marked.empty()) {
    for (const std::string& p : plain) {
      Warn(warnings, "dropped unlisted line: " + p.substr(0, 80));
    }
    items = std::move(marked);
  } else {
    items = std::move(plain);
  }
  if (items.empty() ||
      (items.size() == 1 && (EqualsIgnoreCase(StripQuotes(items[0]), "none") ||
                             EqualsIgnoreCase(StripQuotes(items[0]),
                                              "no events")))) {
    throw Error(ErrorCode::kEmptyTimeline, "no list items in answer");
  }
  return items;
}

LabeledEvent ParseLabel(const std::string& answer) {
  std::string line;
  for (const std::string& l : SplitLines(answer)) {
    if (!Trim(l).empty()) {
      line = std::string(Trim(l));
      break;
    }
  }
  // Models sometimes echo the few-shot arrow.
  const size_t arrow = line.rfind(" -- ");
  if (arrow != std::string::npos) line = line.substr(arrow + 4);
  line = StripQuotes(line);

  LabeledEvent out;
  static const std::regex kSuffix("^(.*\\S)\\s*\\(([^()]*)\\)$");
  static const std::regex kPrefix("^([^:]{3,40}):\\s+(.+)$");
  static const std::regex kTrailing("^(.*\\S),\\s*([^,]{4,30})$");
  std::smatch m;
  if (std::regex_match(line, m, kSuffix)) {
    const TimeSpec t = ParseTimeExpression(m[2].str());
    out.label = m[1].str();
    out.time = t;
    // A parenthetical that is not a time belongs to the label.
    if (!t.known()) out.label = line;
  } else if (std::regex_match(line, m, kPrefix) &&
             ParseTimeExpression(m[1].str()).known()) {
    out.label = line;
    out.time = ParseTimeExpression(m[1].str());
  } else if (std::regex_match(line, m, kTrailing) &&
             ParseTimeExpression(m[2].str()).known()) {
    out.label = line;
    out.time = ParseTimeExpression(m[2].str());
  } else {
    out.label = line;
  }
  return out;
}

bool DetectEvent(LlmContext ctx, const Document& document,
                 const std::string& event, const TimeSpec& timespan,
                 const std::optional<std::string>& parent_event) {
  if (Trim(document.body).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "document body is empty");
  }
  const auto [start, end] = SpanStrings(timespan);
  std::map<std::string, std::string> values = {
      {"text", document.body}, {"event", event}, {"start", start}, {"end", end}};
  std::string key = document.url + " || " + event;
  std::string tmpl = kDetectEvent;
  if (parent_event) {
    values["parent_event"] = *parent_event;
    key += " || " + *parent_event;
    tmpl = kDetectSubevent;
  }
  return ParseYesNo(Call(ctx, tmpl, values, key));
}

std::vector<std::string> ExtractTimelineRaw(LlmContext ctx,
                                            const Document& document,
                                            const std::string& event,
                                            std::vector<std::string>* warnings) {
  const std::string answer =
      Call(ctx, kExtractTimeline, {{"text", document.body}, {"event", event}},
           document.url + " || " + event);
  return ParseList(answer, warnings);
}

std::vector<LabeledEvent> LabelEvents(LlmContext ctx,
                                      const std::vector<std::string>& sentences,
                                      std::vector<std::string>* warnings) {
  if (sentences.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no sentences to label");
  }
  std::vector<LabeledEvent> out;
  for (const std::string& sentence : sentences) {
    LabeledEvent e =
        ParseLabel(Call(ctx, kLabelEvent, {{"sentence", sentence}}, sentence));
    if (e.label.empty()) {
      Warn(warnings, "empty label for: " + sentence.substr(0, 80));
      e.label = sentence;
    }
    e.sentence = sentence;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<LabeledEvent> VerifyTimeline(LlmContext ctx,
                                         const std::vector<LabeledEvent>& events,
                                         const Document& document,
                                         const TimeSpec& timespan) {
  std::vector<LabeledEvent> out;
  for (const LabeledEvent& e : events) {
    if (e.time.known() && !Overlaps(e.time, timespan)) continue;
    const std::string answer =
        Call(ctx, kVerifyEvent, {{"text", document.body}, {"label", e.label}},
             document.url + " || " + e.label);
    if (ParseYesNo(answer)) out.push_back(e);
  }
  return out;
}

LabeledEvent SynthesizeLabel(LlmContext ctx,
                             const std::vector<LabeledEvent>& members) {
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty cluster");
  }
  std::vector<std::string> labels;
  std::vector<TimeSpec> times;
  for (const LabeledEvent& m : members) {
    labels.push_back(m.label);
    times.push_back(m.time);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  LabeledEvent out;
  out.time = Hull(times);
  if (labels.size() == 1) {
    out.label = labels[0];
    return out;
  }
  std::string listing;
  std::string key;
  for (const std::string& l : labels) {
    listing += "- " + l + "\n";
    key += (key.empty() ? "" : " || ") + l;
  }
  out.label = ParseLabel(Call(ctx, kSynthesizeLabel, {{"labels", listing}}, key))
                  .label;
  if (out.label.empty()) out.label = labels[0];
  return out;
}

std::optional<RelationAnswer> InferRelation(
    LlmContext ctx, const RelationRegistry& registry,
    const std::vector<std::string>& candidates, const LabeledEvent& a,
    const LabeledEvent& b) {
  if (a.label == b.label && a.time == b.time) return std::nullopt;
  std::string listing;
  for (const std::string& c : candidates) {
    listing += (listing.empty() ? "'" : ", '") + c + "'";
  }
  const std::string answer = Call(
      ctx, kInferRelation,
      {{"event_a", a.label},
       {"time_a", FormatTimeSpec(a.time)},
       {"event_b", b.label},
       {"time_b", FormatTimeSpec(b.time)},
       {"predicates", listing}},
      a.label + " || " + b.label);

  std::string text;
  for (const std::string& l : SplitLines(answer)) {
    if (!Trim(l).empty()) {
      text = ToLower(StripQuotes(l));
      break;
    }
  }
  if (text.empty() || text == "none" || text.rfind("none", 0) == 0 ||
      text == "no relationship") {
    return std::nullopt;
  }
  RelationAnswer out;
  static const std::regex kForm("^(a|b)\\s+(.+?)\\s+(a|b)$");
  std::smatch m;
  if (std::regex_match(text, m, kForm) && m[1].str() != m[3].str()) {
    out.predicate = m[2].str();
    out.reversed = m[1].str() == "b";
  } else {
    out.predicate = text;
  }
  if (registry.FindPredicate(out.predicate) == nullptr ||
      std::find(candidates.begin(), candidates.end(), out.predicate) ==
          candidates.end()) {
    throw Error(ErrorCode::kUnknownPredicate, out.predicate);
  }
  return out;
}

}  // namespace narrative
