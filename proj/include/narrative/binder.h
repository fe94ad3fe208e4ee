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

#ifndef NARRATIVE_BINDER_H_
#define NARRATIVE_BINDER_H_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "narrative/embedding.h"
#include "narrative/llm.h"
#include "narrative/model.h"

namespace narrative {

struct KgClaim {
  std::string predicate;
  std::string object;
  std::optional<std::string> attribution;

  bool operator==(const KgClaim&) const = default;
};

struct KgEntity {
  std::string id;
  std::string label;
  std::vector<std::string> aliases;
  std::string description;
  TimeSpec time;
  std::vector<std::string> part_of;
  std::vector<std::string> has_parts;
  // Titles of article sections; a match here names a part of the entity.
  std::vector<std::string> sections;
  std::vector<KgClaim> claims;

  bool operator==(const KgEntity&) const = default;
};

class KgSource {
 public:
  virtual ~KgSource() = default;
  // Entities that may match `label`. A snapshot returns all of them.
  virtual std::vector<KgEntity> Lookup(const std::string& label) = 0;
  virtual std::optional<KgEntity> Entity(const std::string& kg_id) = 0;
  size_t queries() const { return queries_; }

 protected:
  std::atomic<size_t> queries_{0};
};

// Closed world: ids outside the snapshot are misses. File format:
//   {"entities": {qid: {"label", "aliases", "description", "time",
//                       "part_of", "has_parts", "sections",
//                       "claims": [{"predicate", "object", "attribution"?}]}}}
class SnapshotSource : public KgSource {
 public:
  explicit SnapshotSource(std::map<std::string, KgEntity> entities);
  static std::unique_ptr<SnapshotSource> FromJson(const std::string& json);
  static std::unique_ptr<SnapshotSource> FromFile(
      const std::filesystem::path& path);
  std::vector<KgEntity> Lookup(const std::string& label) override;
  std::optional<KgEntity> Entity(const std::string& kg_id) override;
  const std::map<std::string, KgEntity>& entities() const { return entities_; }

 private:
  std::map<std::string, KgEntity> entities_;
};

// Wikipedia title search as a proxy, then Wikidata entity data for each hit.
// Every HTTP response is kept in `cache`; a cached request is never sent
// again. Throws SourceUnavailable when a needed response cannot be fetched.
class LiveSource : public KgSource {
 public:
  struct Options {
    std::string wikipedia_api = "https://en.wikipedia.org/w/api.php";
    std::string wikidata_entity =
        "https://www.wikidata.org/wiki/Special:EntityData/";
    size_t search_limit = 5;
    int max_retries = 2;
    std::chrono::milliseconds timeout{20000};
  };
  LiveSource(Options options, ResponseCache& cache);
  std::vector<KgEntity> Lookup(const std::string& label) override;
  std::optional<KgEntity> Entity(const std::string& kg_id) override;
  size_t http_requests() const { return http_requests_; }

 private:
  std::string Get(const std::string& url);
  Options options_;
  ResponseCache& cache_;
  std::atomic<size_t> http_requests_{0};
};

// Parses Wikidata's Special:EntityData JSON for one entity. Times come from
// point in time (P585) or start/end time (P580/P582); part of (P361) and has
// part(s) (P527) become links.
KgEntity ParseWikidataEntity(const std::string& json, const std::string& kg_id);

struct BindingThresholds {
  double direct = 0.90;
  double indirect = 0.60;
  // Minimum score gap between the two best candidates for a Direct binding.
  double gap = 0.05;
  // Candidates below this score are not returned by a search.
  double candidate_floor = 0.35;
  // Added when both times are known and overlap.
  double time_bonus = 0.05;
  // Multiplier for matches against section titles.
  double section_factor = 0.85;
  size_t max_candidates = 5;

  // Throws InvalidThreshold unless 0 <= floor <= indirect <= direct <= 1,
  // gap >= 0 and the factors lie in [0, 1].
  void Validate() const;
};

// Label similarity in [0, 1]: clamped cosine of the embeddings when an
// embedder is given, otherwise case-insensitive normalized edit similarity.
double LabelSimilarity(const std::string& a, const std::string& b,
                       EmbeddingBackend* embedder);

// Best score per entity over its label, aliases and sections, plus the time
// bonus, ranked by score (then id). Throws InvalidArgument for an empty
// label.
std::vector<KgCandidate> SearchCandidates(KgSource& source,
                                          const std::string& label,
                                          const TimeSpec& time,
                                          EmbeddingBackend* embedder,
                                          const BindingThresholds& thresholds);

BindingResult ClassifyBinding(const std::string& label, const TimeSpec& time,
                              const std::vector<KgCandidate>& candidates,
                              const BindingThresholds& thresholds);

struct AmbiguityEntry {
  std::string event_id;
  std::string label;
  // The candidates within the gap of the best one, best first.
  std::vector<KgCandidate> candidates;
};

struct CompoundLabelEntry {
  std::string event_id;
  std::string label;
  std::string reason;
};

struct RecursiveNodeFlag {
  std::string narrative_id;
  std::string event_id;
  std::string kg_id;
  std::string note;
  // An enclosing entity whose time covers the children, when one is known.
  std::optional<std::string> suggested_kg_id;
};

struct BindingReport {
  // Event id -> binding, for every event in the eta closure of the root.
  std::map<std::string, BindingResult> bindings;
  // Narratives in the order they were visited; each appears once.
  std::vector<std::string> visited;
  std::vector<AmbiguityEntry> ambiguities;
  std::vector<CompoundLabelEntry> compound_labels;
  std::vector<RecursiveNodeFlag> recursive_flags;

  nlohmann::json ToJson() const;
};

// Heuristic for labels that name two events: two different four-digit
// years, or "X and Y" where both sides carry a verb. Returns the reason.
std::optional<std::string> CompoundLabelReason(const std::string& label);

struct BindOptions {
  BindingThresholds thresholds;
  // Import claims and links of Direct and Indirect bindings.
  bool import_triples = true;
};

// Binds every event of `narrative_id` and of every narrative reachable
// through eta, each narrative once, and stores the results as the events'
// binding annotations. Nothing else in the store changes. Throws
// MissingNarrative.
BindingReport BindNarrative(NarrativeStore& store,
                            const std::string& narrative_id, KgSource& source,
                            EmbeddingBackend* embedder,
                            const BindOptions& options = {});

// Local stand-in for an unbound event: its label, time, participants and,
// for a recursive node in `narrative_id`, the events of its child narrative.
// Throws AlreadyBound when the event has a Direct or Indirect binding.
VirtualSubgraph MaterializeVirtual(const NarrativeStore& store,
                                   const std::string& narrative_id,
                                   const std::string& event_id);

}  // namespace narrative

#endif  // NARRATIVE_BINDER_H_
