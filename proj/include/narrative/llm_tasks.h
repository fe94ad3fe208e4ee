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

#ifndef NARRATIVE_LLM_TASKS_H_
#define NARRATIVE_LLM_TASKS_H_

#include <optional>
#include <string>
#include <vector>

#include "narrative/corpus.h"
#include "narrative/llm.h"
#include "narrative/model.h"
#include "narrative/prompts.h"
#include "narrative/time_spec.h"

namespace narrative {

struct LlmContext {
  CompletionBackend& backend;
  const PromptSet& prompts;
};

struct LabeledEvent {
  std::string label;
  TimeSpec time;
  // The extracted sentence the label was derived from.
  std::string sentence;

  bool operator==(const LabeledEvent&) const = default;
};

// Response parsing. Warnings are appended to `warnings` when non-null.
// First word yes/no (also true/false); UnparseableAnswer otherwise.
bool ParseYesNo(const std::string& answer);
// One item per line with bullets and numbering stripped. When some lines are
// list items, other lines (preambles, closing remarks) are dropped with a
// warning. Throws EmptyTimeline when nothing remains or the answer is "none".
std::vector<std::string> ParseList(const std::string& answer,
                                   std::vector<std::string>* warnings);
// "label (time)"; also "<date>: label" and "label, <date>", in which case the
// label keeps the date text. Unknown time when none of these match.
LabeledEvent ParseLabel(const std::string& answer);

// Is `document` clearly about `event` within `timespan`? With a parent
// event the subevent template is used.
bool DetectEvent(LlmContext ctx, const Document& document,
                 const std::string& event, const TimeSpec& timespan,
                 const std::optional<std::string>& parent_event = std::nullopt);

std::vector<std::string> ExtractTimelineRaw(LlmContext ctx,
                                            const Document& document,
                                            const std::string& event,
                                            std::vector<std::string>* warnings);

std::vector<LabeledEvent> LabelEvents(LlmContext ctx,
                                      const std::vector<std::string>& sentences,
                                      std::vector<std::string>* warnings);

// Drops events whose known time does not intersect `timespan`, then those the
// model does not confirm as mentioned in the document. Unknown times stay.
std::vector<LabeledEvent> VerifyTimeline(LlmContext ctx,
                                         const std::vector<LabeledEvent>& events,
                                         const Document& document,
                                         const TimeSpec& timespan);

// One label for a cluster; the time is the hull of the member times. A
// cluster whose members share one label keeps it without a model call.
LabeledEvent SynthesizeLabel(LlmContext ctx,
                             const std::vector<LabeledEvent>& members);

// Answer of the relation prompt: `predicate` holds from `source` to
// `target`, where source/target are the two events passed in, possibly
// swapped when the model answered "B <predicate> A".
struct RelationAnswer {
  std::string predicate;
  bool reversed = false;
};

// Asks which of `candidates` relates a to b. Returns nullopt for "none" and
// for a == b (same label and time) without calling the model. Throws
// UnknownPredicate when the answer names a predicate outside the registry or
// the candidates.
std::optional<RelationAnswer> InferRelation(
    LlmContext ctx, const RelationRegistry& registry,
    const std::vector<std::string>& candidates, const LabeledEvent& a,
    const LabeledEvent& b);

}  // namespace narrative

#endif  // NARRATIVE_LLM_TASKS_H_
