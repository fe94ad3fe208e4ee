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

#ifndef NARRATIVE_SERIALIZATION_H_
#define NARRATIVE_SERIALIZATION_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "narrative/model.h"

namespace narrative {

using Json = nlohmann::json;

// Canonical interchange form: {"narratives", "relations", "viewpoints"} with
// every object's keys sorted. Narratives carry their nodes inline; an event
// shared by several narratives appears, identically, in each of them.
Json StoreToJson(const NarrativeStore& store);
// Rebuilds through the store API, so every invariant is re-checked. Throws
// ParseError on malformed input and the model errors on invalid content.
NarrativeStore StoreFromJson(const Json& json);

std::string SerializeStore(const NarrativeStore& store);
NarrativeStore DeserializeStore(std::string_view text);

// A copy without the given narratives and the events only they contain.
// Throws MissingNarrative when a kept narrative's eta points at a removed
// one.
NarrativeStore WithoutNarratives(const NarrativeStore& store,
                                 const std::set<std::string>& removed);

// Same format restricted to the given narratives and everything they reach
// through eta. Used for exports and golden files.
Json NarrativesToJson(const NarrativeStore& store,
                      const std::vector<std::string>& roots);
std::string SerializeNarratives(const NarrativeStore& store,
                                const std::vector<std::string>& roots);

Json TimeSpecToJson(const TimeSpec& time);
TimeSpec TimeSpecFromJson(const Json& json);
Json EventToJson(const EventNode& event);
EventNode EventFromJson(const Json& json);
Json BindingToJson(const BindingResult& binding);
BindingResult BindingFromJson(const Json& json);
Json CandidateToJson(const KgCandidate& candidate);
KgCandidate CandidateFromJson(const Json& json);
Json ViolationToJson(const Violation& violation);

// Two-space indented dump with a trailing newline.
std::string CanonicalDump(const Json& json);

}  // namespace narrative

#endif  // NARRATIVE_SERIALIZATION_H_
