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

#ifndef NARRATIVE_MINER_H_
#define NARRATIVE_MINER_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "narrative/corpus.h"
#include "narrative/embedding.h"
#include "narrative/hdbscan.h"
#include "narrative/llm.h"
#include "narrative/llm_tasks.h"
#include "narrative/model.h"
#include "narrative/prompts.h"

namespace narrative {

// What happens to points HDBSCAN labels as noise.
enum class NoisePolicy { kSingleton, kDrop };

struct MineConfig {
  std::string event_name;
  // Must be a known interval; events outside it are dropped.
  TimeSpec timespan;
  std::string viewpoint;
  int max_recursion_depth = 1;
  HdbscanParams hdbscan;
  // Cosine similarity above which synthesized clusters are merged.
  double merge_threshold = 0.8;
  size_t concurrency = 4;
  NoisePolicy noise = NoisePolicy::kSingleton;
  // Predicates offered to the relation prompt.
  std::vector<std::string> relation_candidates = {"happened after"};

  // Throws InvalidArgument for an empty event name, a timespan that is not
  // an interval, negative depth, zero concurrency or a bad threshold.
  void Validate() const;
};

struct Timeline {
  std::string document_id;
  // In extraction order.
  std::vector<LabeledEvent> events;
};

struct SkippedDocument {
  std::string document_id;
  std::string stage;
  std::string error;
};

struct MiningReport {
  std::string event_name;
  std::string viewpoint;
  // Empty when no narrative was created.
  std::string narrative_id;
  std::string parent_event;
  int depth = 0;
  size_t documents = 0;
  size_t documents_detected = 0;
  size_t timelines = 0;
  size_t timeline_events = 0;
  // HDBSCAN output before noise handling.
  std::vector<size_t> cluster_sizes;
  size_t noise = 0;
  size_t merges = 0;
  size_t events = 0;
  size_t excluded_self_references = 0;
  size_t relations = 0;
  std::vector<SkippedDocument> skipped;
  std::vector<std::string> warnings;
  // Recursion: one report per event node that was expanded.
  std::vector<MiningReport> children;
  double seconds = 0.0;

  // Counts exclude timings when `with_timings` is false, which keeps the
  // output reproducible.
  nlohmann::json ToJson(bool with_timings = true) const;
  // Nodes in this report's recursion tree with a child narrative.
  size_t RecursionFanOut() const;
};

struct MiningBackends {
  CompletionBackend& llm;
  const PromptSet& prompts;
  EmbeddingBackend& embedder;
};

// Event clusters over pooled timeline events.
struct MatchResult {
  // (timeline index, event index) per pooled event, in timeline order.
  std::vector<std::pair<size_t, size_t>> pooled;
  // Label embedding per pooled event.
  std::vector<Vector> vectors;
  // Pooled indices per candidate event: HDBSCAN clusters, then noise points
  // as singletons unless dropped.
  std::vector<std::vector<size_t>> clusters;
  std::vector<size_t> cluster_sizes;
  size_t noise = 0;
};

// Detection, extraction, labelling and verification for each document, up
// to `config.concurrency` documents at a time. Failures of one document are
// recorded in the report and the document is skipped. Output is in document
// order; documents with no surviving events contribute no timeline.
// `parent_event`, when non-empty, switches detection to the subevent prompt.
std::vector<Timeline> ExtractTimelines(const MineConfig& config,
                                       const std::vector<Document>& documents,
                                       MiningBackends backends,
                                       const std::string& parent_event,
                                       MiningReport& report);

// Pools every timeline event, embeds the labels and clusters them. Throws
// InvalidArgument for an empty timeline list.
MatchResult PairwiseMatch(const std::vector<Timeline>& timelines,
                          EmbeddingBackend& embedder,
                          const HdbscanParams& params, NoisePolicy noise);

// A synthesized event before it is committed to the store.
struct FragmentEvent {
  LabeledEvent event;
  std::vector<Provenance> provenance;
};

struct FragmentEdge {
  size_t source = 0;
  std::string predicate;
  size_t target = 0;
};

// Events in time order (unknown times last) and the edges between them.
struct NarrativeFragment {
  std::vector<FragmentEvent> events;
  std::vector<FragmentEdge> edges;
};

// Merges clusters by centroid similarity, synthesizes one event per merged
// cluster, drops events whose label equals one of `excluded_labels`
// (case-insensitive), orders the rest by time and asks for a relation
// between each pair of neighbours.
NarrativeFragment Synthesize(const MatchResult& match,
                             const std::vector<Timeline>& timelines,
                             const std::vector<Document>& documents,
                             const MineConfig& config,
                             const RelationRegistry& registry,
                             MiningBackends backends,
                             const std::vector<std::string>& excluded_labels,
                             MiningReport& report);

// Runs the pipeline for `config.event_name` over the viewpoint's documents,
// adds the narrative to `store` and expands its events recursively up to
// `config.max_recursion_depth`. Throws UnknownViewpoint,
// EmptyViewpointCollection, NoDocumentsDetected, or the backend error that
// made every document fail.
MiningReport Mine(const MineConfig& config, NarrativeStore& store,
                  const std::vector<Document>& corpus, MiningBackends backends);

// Expands the events of an existing narrative whose eta is unset, treating it
// as sitting at `depth`. Sibling events are processed in order so ids are
// reproducible.
void Recurse(const std::string& narrative_id, const MineConfig& config,
             NarrativeStore& store, const std::vector<Document>& documents,
             MiningBackends backends, int depth,
             const std::vector<std::string>& ancestors, MiningReport& report);

}  // namespace narrative

#endif  // NARRATIVE_MINER_H_
