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

#ifndef NARRATIVE_COMPARE_H_
#define NARRATIVE_COMPARE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "narrative/embedding.h"
#include "narrative/model.h"

namespace narrative {

enum class AlignmentBasis { kSharedBinding, kSimilarity };

std::string_view AlignmentBasisName(AlignmentBasis basis);

struct AlignedPair {
  std::string first;   // event in the first narrative
  std::string second;  // event in the second narrative
  AlignmentBasis basis = AlignmentBasis::kSimilarity;
  double score = 0.0;

  bool operator==(const AlignedPair&) const = default;
};

// One-to-one: every event appears in at most one pair.
struct EventAlignment {
  std::vector<AlignedPair> pairs;
};

struct CompareOptions {
  // Minimum label cosine for a similarity pair.
  double sim_threshold = 0.8;
  // Also compare the events of child narratives one eta level down.
  bool flatten = false;

  // Throws InvalidThreshold outside [0, 1].
  void Validate() const;
};

// The events a narrative contributes to a comparison, in narrative order;
// with `flatten`, each recursive node is followed by its child's events.
std::vector<std::string> ComparedEvents(const NarrativeStore& store,
                                        const std::string& narrative_id,
                                        bool flatten);

// First pairs events that are the same node or bound (Direct or Indirect) to
// the same graph id, then pairs the rest greedily by label cosine, best
// first, ties broken by the pair's ids regardless of orientation. Pairs come
// out sorted by first event id. Throws MissingNarrative.
EventAlignment AlignEvents(const NarrativeStore& store, const std::string& n1,
                           const std::string& n2, EmbeddingBackend& embedder,
                           const CompareOptions& options = {});

struct GroupMember {
  std::string narrative_id;
  std::string event_id;
  std::string label;

  auto operator<=>(const GroupMember&) const = default;
};

// Members sorted by (narrative, event); groups sorted by their first member.
using EventGroup = std::vector<GroupMember>;

// Groups from the transitive closure of all pairwise alignments that have a
// member in every input narrative. Duplicate inputs are ignored. Throws
// InvalidArgument for an empty list.
std::vector<EventGroup> Commonalities(const NarrativeStore& store,
                                      const std::vector<std::string>& narratives,
                                      EmbeddingBackend& embedder,
                                      const CompareOptions& options = {});

struct UniqueEvent {
  std::string event_id;
  std::string label;
  std::string viewpoint;

  bool operator==(const UniqueEvent&) const = default;
};

struct NarrativeDifferences {
  std::vector<UniqueEvent> unique_to_first;
  std::vector<UniqueEvent> unique_to_second;
};

// Events left out of AlignEvents(n1, n2), in narrative order.
NarrativeDifferences Differences(const NarrativeStore& store,
                                 const std::string& n1, const std::string& n2,
                                 EmbeddingBackend& embedder,
                                 const CompareOptions& options = {});

// The event nothing happened before: no incoming edge from a predicate with
// a temporal direction, and the earliest time among such events. Nullopt
// for an empty narrative, or when the earliest cannot be told apart (several
// such events with unknown times, or a tie). Throws MissingNarrative.
std::optional<std::string> NarrativeStart(const NarrativeStore& store,
                                          const std::string& narrative_id);

struct ComparisonReport {
  std::vector<std::string> narratives;
  CompareOptions options;
  // One entry per unordered pair (i < j) of inputs.
  struct Pairwise {
    std::string first;
    std::string second;
    EventAlignment alignment;
    NarrativeDifferences differences;
  };
  std::vector<Pairwise> pairwise;
  std::vector<EventGroup> commonalities;
  std::map<std::string, std::optional<std::string>> starts;

  nlohmann::json ToJson(const NarrativeStore& store) const;
};

ComparisonReport CompareNarratives(const NarrativeStore& store,
                                   const std::vector<std::string>& narratives,
                                   EmbeddingBackend& embedder,
                                   const CompareOptions& options = {});

}  // namespace narrative

#endif  // NARRATIVE_COMPARE_H_
